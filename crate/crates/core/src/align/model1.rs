use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{AlignError, AlignmentLinkSet};
use crate::scalar::Real;
use crate::textnorm::{ParallelCorpus, Sentence};

pub const NULL_WORD: &str = "<NULL>";

#[derive(Debug, Clone, Default)]
struct Vocab {
    words: Vec<String>,
    index: HashMap<String, u32>,
}

impl Vocab {
    fn intern(&mut self, w: &str) -> u32 {
        if let Some(&id) = self.index.get(w) {
            return id;
        }
        let id = self.words.len() as u32;
        self.words.push(w.to_string());
        self.index.insert(w.to_string(), id);
        id
    }

    fn get(&self, w: &str) -> Option<u32> {
        self.index.get(w).copied()
    }
}

/// Lexical translation table `t(target | source)`. Source id 0 is the NULL
/// word. Only co-occurring pairs are stored; everything else is zero.
#[derive(Debug, Clone)]
pub struct Model1Table<F> {
    src: Vocab,
    tgt: Vocab,
    rows: Vec<BTreeMap<u32, F>>,
}

impl<F: Real> Model1Table<F> {
    /// `t(tgt | src)`, with `None` standing for the NULL word.
    pub fn prob(&self, src: Option<&str>, tgt: &str) -> F {
        let e = match src {
            None => Some(0),
            Some(w) => self.src.get(w),
        };
        match (e, self.tgt.get(tgt)) {
            (Some(e), Some(f)) => self.rows[e as usize].get(&f).copied().unwrap_or_else(F::zero),
            _ => F::zero(),
        }
    }

    /// Source words including the NULL word at position 0.
    pub fn source_words(&self) -> &[String] {
        &self.src.words
    }

    pub fn row_sum(&self, src: Option<&str>) -> Option<F> {
        let e = match src {
            None => 0,
            Some(w) => self.src.get(w)?,
        };
        Some(self.rows[e as usize].values().copied().sum())
    }

    /// Sets every row entry; used to build deterministic tables directly.
    pub fn from_entries<'a, I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (Option<&'a str>, &'a str, F)>,
    {
        let mut table = Model1Table::empty();
        for (e, f, p) in entries {
            let e = match e {
                None => 0,
                Some(w) => table.src_id(w),
            };
            let f = table.tgt.intern(f);
            table.rows[e as usize].insert(f, p);
        }
        table
    }

    fn empty() -> Self {
        let mut src = Vocab::default();
        src.intern(NULL_WORD);
        Model1Table {
            src,
            tgt: Vocab::default(),
            rows: vec![BTreeMap::new()],
        }
    }

    fn src_id(&mut self, w: &str) -> u32 {
        let id = self.src.intern(w);
        if id as usize == self.rows.len() {
            self.rows.push(BTreeMap::new());
        }
        id
    }

    fn encode(&self, src: &Sentence, tgt: &Sentence) -> (Vec<u32>, Vec<u32>) {
        // NULL first, then the source words
        let e = std::iter::once(0)
            .chain(src.surfaces().map(|w| self.src.get(w).expect("interned")))
            .collect();
        let f = tgt.surfaces().map(|w| self.tgt.get(w).expect("interned")).collect();
        (e, f)
    }

    fn get_id(&self, e: u32, f: u32) -> F {
        self.rows[e as usize].get(&f).copied().unwrap_or_else(F::zero)
    }
}

/// Result of [`train_model1`]: the table and the corpus log-likelihood
/// under the initial table and after each M-step.
#[derive(Debug, Clone)]
pub struct Model1Training<F> {
    pub table: Model1Table<F>,
    pub log_likelihoods: Vec<F>,
}

type Counts<F> = Vec<(u32, u32, F)>;

fn expected_counts<F: Real>(e: &[u32], f: &[u32], table: &Model1Table<F>) -> (Counts<F>, F) {
    let mut counts = Vec::with_capacity(e.len() * f.len());
    let mut ll = F::zero();
    let norm = F::of_count(e.len() as u64);
    for &fj in f {
        let denom: F = e.iter().map(|&ei| table.get_id(ei, fj)).sum();
        if denom <= F::zero() {
            ll += F::neg_infinity();
            continue;
        }
        ll += (denom / norm).ln();
        for &ei in e {
            counts.push((ei, fj, table.get_id(ei, fj) / denom));
        }
    }
    (counts, ll)
}

/// EM-trained IBM Model 1 with a NULL source word, initialised uniformly
/// over co-occurring target words.
pub fn train_model1<F: Real>(
    corpus: &ParallelCorpus,
    iterations: usize,
) -> Result<Model1Training<F>, AlignError> {
    if corpus.is_empty() {
        return Err(AlignError::EmptyCorpus);
    }
    if iterations == 0 {
        return Err(AlignError::ZeroIterations);
    }
    let mut table = Model1Table::<F>::empty();
    for (s, t) in corpus.pairs() {
        let es: Vec<u32> = std::iter::once(0).chain(s.surfaces().map(|w| table.src_id(w))).collect();
        let fs: Vec<u32> = t.surfaces().map(|w| table.tgt.intern(w)).collect();
        for &e in &es {
            for &f in &fs {
                table.rows[e as usize].insert(f, F::one());
            }
        }
    }
    for row in &mut table.rows {
        let n = F::of_count(row.len() as u64);
        for v in row.values_mut() {
            *v = F::one() / n;
        }
    }

    let encoded: Vec<(Vec<u32>, Vec<u32>)> =
        corpus.pairs().iter().map(|(s, t)| table.encode(s, t)).collect();
    let mut log_likelihoods = Vec::with_capacity(iterations + 1);
    for _ in 0..iterations {
        // per-pair counts are collected in corpus order, then reduced serially
        let partial: Vec<(Counts<F>, F)> = encoded
            .par_iter()
            .map(|(e, f)| expected_counts(e, f, &table))
            .collect();
        let mut ll = F::zero();
        let mut acc: Vec<BTreeMap<u32, F>> = vec![BTreeMap::new(); table.rows.len()];
        for (counts, pair_ll) in partial {
            ll += pair_ll;
            for (e, f, c) in counts {
                *acc[e as usize].entry(f).or_insert_with(F::zero) += c;
            }
        }
        log_likelihoods.push(ll);
        for (row, counts) in table.rows.iter_mut().zip(acc) {
            let total: F = counts.values().copied().sum();
            if total > F::zero() {
                for (f, v) in row.iter_mut() {
                    *v = counts.get(f).copied().unwrap_or_else(F::zero) / total;
                }
            }
        }
    }
    log_likelihoods.push(log_likelihood(&table, corpus));
    Ok(Model1Training {
        table,
        log_likelihoods,
    })
}

/// `Σ_pairs Σ_j ln( Σ_i t(f_j | e_i) / (l + 1) )`, i.e. the Model 1
/// likelihood without the length term.
pub fn log_likelihood<F: Real>(table: &Model1Table<F>, corpus: &ParallelCorpus) -> F {
    let mut ll = F::zero();
    for (s, t) in corpus.pairs() {
        let norm = F::of_count(s.len() as u64 + 1);
        for f in t.surfaces() {
            let denom: F = std::iter::once(None)
                .chain(s.surfaces().map(Some))
                .map(|e| table.prob(e, f))
                .sum();
            ll += crate::scalar::safe_ln(denom / norm);
        }
    }
    ll
}

/// Links each target word to its most probable source word. The NULL word
/// is considered first and only a strictly larger probability displaces the
/// current best, so ties go to NULL and then to the smaller source index.
pub fn viterbi_align<F: Real>(table: &Model1Table<F>, src: &Sentence, tgt: &Sentence) -> AlignmentLinkSet {
    let mut links = AlignmentLinkSet::empty(src.len(), tgt.len());
    for (j, f) in tgt.surfaces().enumerate() {
        let mut best = table.prob(None, f);
        let mut best_i = None;
        for (i, e) in src.surfaces().enumerate() {
            let p = table.prob(Some(e), f);
            if p > best {
                best = p;
                best_i = Some(i);
            }
        }
        if let Some(i) = best_i {
            links.insert(i, j).expect("indices in range");
        }
    }
    links
}
