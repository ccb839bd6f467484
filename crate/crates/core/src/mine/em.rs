use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use super::lattice::{backward, forward, lattice_edges, relative_mismatch};
use super::model::{posterior_translit, TransliterationModel, Unigram};
use super::multigram::{Multigram, Shape};
use super::MineError;
use crate::align::WordPairList;
use crate::scalar::{log_add, parse_real, safe_ln, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct EmConfig {
    pub max_iterations: usize,
    /// Training stops once an iteration improves the log-likelihood by less
    /// than this. `f64::NEG_INFINITY` forces `max_iterations` M-steps.
    pub convergence: f64,
    pub shapes: Vec<Shape>,
    /// Weight multigram counts by each pair's transliteration posterior.
    /// Turning this off trains theta on every pair and no longer guarantees
    /// a monotone likelihood.
    pub weight_by_posterior: bool,
    /// Pairs with a longer side are skipped.
    pub max_word_chars: usize,
    pub initial_lambda: f64,
}

impl Default for EmConfig {
    fn default() -> Self {
        EmConfig {
            max_iterations: 100,
            convergence: 1e-6,
            shapes: Shape::BASIC.to_vec(),
            weight_by_posterior: true,
            max_word_chars: 30,
            initial_lambda: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    EmptySide,
    TooLong,
    ZeroProbability,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedPair {
    pub source: String,
    pub target: String,
    pub reason: SkipReason,
}

/// One E/M round. The log-likelihood and lattice check come from the E-step
/// (parameters entering the round); the remaining fields describe the
/// parameters produced by the M-step.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationStats<F> {
    pub log_likelihood: F,
    pub max_lattice_mismatch: F,
    pub lambda: F,
    pub theta_sum: F,
    pub src_unigram_sum: F,
    pub tgt_unigram_sum: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmTrace<F> {
    pub iterations: Vec<IterationStats<F>>,
    /// Every evaluated data log-likelihood in order; the last entry belongs
    /// to the returned model.
    pub log_likelihoods: Vec<F>,
    pub converged: bool,
    pub skipped: Vec<SkippedPair>,
}

/// Characters of both sides, count, and the original words.
type UsablePair<'a> = (Vec<char>, Vec<char>, u64, &'a str, &'a str);

struct TrainPair<F> {
    weight: F,
    cells: usize,
    links: Vec<(usize, usize)>,
    multigram_ids: Vec<usize>,
    src_chars: Vec<(usize, F)>,
    tgt_chars: Vec<(usize, F)>,
}

struct Params<F> {
    log_theta: Vec<F>,
    lambda: F,
    src_lu: Vec<F>,
    tgt_lu: Vec<F>,
}

struct PairExpectation<F> {
    log_mix: F,
    mismatch: F,
    gamma: F,
    edge_counts: Vec<(usize, F)>,
}

fn char_counts<F: Real>(word: &[char], alphabet: &BTreeMap<char, usize>) -> Vec<(usize, F)> {
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for c in word {
        *counts.entry(alphabet[c]).or_default() += 1;
    }
    counts.into_iter().map(|(i, n)| (i, F::of_count(n))).collect()
}

fn expectation<F: Real>(pair: &TrainPair<F>, params: &Params<F>, weighted: bool) -> PairExpectation<F> {
    let weights: Vec<F> = pair.multigram_ids.iter().map(|&id| params.log_theta[id]).collect();
    let alpha = forward(pair.cells, &pair.links, &weights);
    let beta = backward(pair.cells, &pair.links, &weights);
    let log_p1 = alpha[pair.cells - 1];
    let mismatch = relative_mismatch(log_p1, beta[0]);
    let log_ntr: F = pair
        .src_chars
        .iter()
        .map(|&(c, n)| n * params.src_lu[c])
        .chain(pair.tgt_chars.iter().map(|&(c, n)| n * params.tgt_lu[c]))
        .sum();
    let a = safe_ln(params.lambda) + log_p1;
    let b = safe_ln(F::one() - params.lambda) + log_ntr;
    let log_mix = log_add(a, b);
    let gamma = if a == F::neg_infinity() || log_mix == F::neg_infinity() {
        F::zero()
    } else {
        (a - log_mix).exp().min(F::one())
    };
    let theta_weight = pair.weight * if weighted { gamma } else { F::one() };
    let mut edge_counts = Vec::new();
    if log_p1 > F::neg_infinity() && theta_weight > F::zero() {
        for ((&(from, to), &id), &w) in pair.links.iter().zip(&pair.multigram_ids).zip(&weights) {
            let lp = alpha[from] + w + beta[to] - log_p1;
            if lp > F::neg_infinity() {
                edge_counts.push((id, theta_weight * lp.exp()));
            }
        }
    }
    PairExpectation {
        log_mix,
        mismatch,
        gamma,
        edge_counts,
    }
}

fn normalized_logs<F: Real>(counts: &[F]) -> Option<Vec<F>> {
    let total: F = counts.iter().copied().sum();
    if total > F::zero() {
        Some(counts.iter().map(|&c| safe_ln(c / total)).collect())
    } else {
        None
    }
}

fn log_sum<F: Real>(lps: &[F]) -> F {
    lps.iter().map(|lp| lp.exp()).sum()
}

/// Unsupervised EM for the transliteration mixture
/// `p(e,f) = λ·p1(e,f) + (1−λ)·p_src(e)·p_tgt(f)`.
///
/// Theta starts uniform over every multigram occurring in a candidate
/// lattice, unigram models start at the (count-weighted) character
/// frequencies and lambda at `initial_lambda`.
pub fn em_train<F: Real>(
    candidates: &WordPairList,
    config: &EmConfig,
) -> Result<(TransliterationModel<F>, EmTrace<F>), MineError> {
    if candidates.is_empty() {
        return Err(MineError::NoCandidates);
    }
    if config.max_iterations == 0 {
        return Err(MineError::ZeroIterations);
    }
    if !(0.0..=1.0).contains(&config.initial_lambda) {
        return Err(MineError::LambdaOutOfRange(config.initial_lambda));
    }
    let shapes = Shape::validate_set(&config.shapes)?;

    let mut skipped = Vec::new();
    let mut usable: Vec<UsablePair> = Vec::new();
    for p in candidates {
        let e: Vec<char> = p.source.chars().collect();
        let f: Vec<char> = p.target.chars().collect();
        let reason = if e.is_empty() || f.is_empty() {
            Some(SkipReason::EmptySide)
        } else if e.len() > config.max_word_chars || f.len() > config.max_word_chars {
            Some(SkipReason::TooLong)
        } else {
            None
        };
        match reason {
            Some(reason) => skipped.push(SkippedPair {
                source: p.source.clone(),
                target: p.target.clone(),
                reason,
            }),
            None => usable.push((e, f, p.count, &p.source, &p.target)),
        }
    }

    let mut multigram_set = BTreeSet::new();
    let mut src_alpha = BTreeSet::new();
    let mut tgt_alpha = BTreeSet::new();
    for (e, f, ..) in &usable {
        multigram_set.extend(lattice_edges(&shapes, e, f).into_iter().map(|ed| ed.multigram));
        src_alpha.extend(e.iter().copied());
        tgt_alpha.extend(f.iter().copied());
    }
    let multigrams: Vec<Multigram> = multigram_set.into_iter().collect();
    let mg_index: BTreeMap<Multigram, usize> = multigrams.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let src_index: BTreeMap<char, usize> = src_alpha.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let tgt_index: BTreeMap<char, usize> = tgt_alpha.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    let mut pairs: Vec<TrainPair<F>> = usable
        .iter()
        .map(|(e, f, count, ..)| {
            let edges = lattice_edges(&shapes, e, f);
            TrainPair {
                weight: F::of_count(*count),
                cells: (e.len() + 1) * (f.len() + 1),
                links: edges.iter().map(|ed| (ed.from, ed.to)).collect(),
                multigram_ids: edges.iter().map(|ed| mg_index[&ed.multigram]).collect(),
                src_chars: char_counts(e, &src_index),
                tgt_chars: char_counts(f, &tgt_index),
            }
        })
        .collect();

    let mut src_counts = vec![F::zero(); src_index.len()];
    let mut tgt_counts = vec![F::zero(); tgt_index.len()];
    for p in &pairs {
        for &(c, n) in &p.src_chars {
            src_counts[c] += n * p.weight;
        }
        for &(c, n) in &p.tgt_chars {
            tgt_counts[c] += n * p.weight;
        }
    }
    let mut params = Params {
        log_theta: vec![-F::of_count(multigrams.len() as u64).ln(); multigrams.len()],
        lambda: F::of(config.initial_lambda),
        src_lu: normalized_logs(&src_counts).unwrap_or_default(),
        tgt_lu: normalized_logs(&tgt_counts).unwrap_or_default(),
    };

    let weighted = config.weight_by_posterior;
    let tol = F::of(config.convergence);
    let mut trace = EmTrace {
        iterations: Vec::new(),
        log_likelihoods: Vec::new(),
        converged: false,
        skipped,
    };

    let mut first = true;
    loop {
        let expectations: Vec<PairExpectation<F>> =
            pairs.par_iter().map(|p| expectation(p, &params, weighted)).collect();

        if first {
            // pairs impossible under both components carry no information
            let mut keep = Vec::with_capacity(pairs.len());
            let mut kept_exp = Vec::with_capacity(pairs.len());
            for ((p, ex), u) in pairs.into_iter().zip(expectations).zip(&usable) {
                if ex.log_mix == F::neg_infinity() {
                    trace.skipped.push(SkippedPair {
                        source: u.3.to_string(),
                        target: u.4.to_string(),
                        reason: SkipReason::ZeroProbability,
                    });
                } else {
                    keep.push(p);
                    kept_exp.push(ex);
                }
            }
            pairs = keep;
            if pairs.is_empty() {
                return Err(MineError::NoUsablePairs);
            }
            if !trace.skipped.is_empty() {
                log::warn!("em: skipped {} candidate pairs", trace.skipped.len());
            }
            first = false;
            if !step(&mut params, &mut trace, &pairs, kept_exp, tol, config, &multigrams)? {
                break;
            }
            continue;
        }
        if !step(&mut params, &mut trace, &pairs, expectations, tol, config, &multigrams)? {
            break;
        }
    }

    let entries: BTreeMap<Multigram, F> = multigrams.iter().copied().zip(params.log_theta.iter().copied()).collect();
    let src_uni = Unigram::from_log_probs(src_index.keys().copied().zip(params.src_lu.iter().copied()).collect());
    let tgt_uni = Unigram::from_log_probs(tgt_index.keys().copied().zip(params.tgt_lu.iter().copied()).collect());
    let model = TransliterationModel::assemble(shapes, entries, params.lambda, src_uni, tgt_uni);
    Ok((model, trace))
}

/// Records the E-step, then either stops (convergence or iteration budget)
/// or applies the M-step. Returns whether training continues.
fn step<F: Real>(
    params: &mut Params<F>,
    trace: &mut EmTrace<F>,
    pairs: &[TrainPair<F>],
    expectations: Vec<PairExpectation<F>>,
    tol: F,
    config: &EmConfig,
    multigrams: &[Multigram],
) -> Result<bool, MineError> {
    let mut ll = F::zero();
    let mut mismatch = F::zero();
    for (p, ex) in pairs.iter().zip(&expectations) {
        ll += p.weight * ex.log_mix;
        mismatch = mismatch.max(ex.mismatch);
    }
    let round = trace.iterations.len();
    if !ll.is_finite() {
        return Err(MineError::Diverged(round));
    }
    if let Some(&prev) = trace.log_likelihoods.last() {
        if ll - prev < tol {
            trace.log_likelihoods.push(ll);
            trace.converged = true;
            return Ok(false);
        }
    }
    trace.log_likelihoods.push(ll);
    if round == config.max_iterations {
        return Ok(false);
    }

    let mut theta_counts = vec![F::zero(); multigrams.len()];
    let mut src_counts = vec![F::zero(); params.src_lu.len()];
    let mut tgt_counts = vec![F::zero(); params.tgt_lu.len()];
    let (mut translit_mass, mut total_mass) = (F::zero(), F::zero());
    for (p, ex) in pairs.iter().zip(expectations) {
        for (id, c) in ex.edge_counts {
            theta_counts[id] += c;
        }
        let ntr = p.weight * (F::one() - ex.gamma);
        for &(c, n) in &p.src_chars {
            src_counts[c] += ntr * n;
        }
        for &(c, n) in &p.tgt_chars {
            tgt_counts[c] += ntr * n;
        }
        translit_mass += p.weight * ex.gamma;
        total_mass += p.weight;
    }
    if let Some(lt) = normalized_logs(&theta_counts) {
        params.log_theta = lt;
    }
    // a component without responsibility keeps its previous parameters
    if let Some(lu) = normalized_logs(&src_counts) {
        params.src_lu = lu;
    }
    if let Some(lu) = normalized_logs(&tgt_counts) {
        params.tgt_lu = lu;
    }
    params.lambda = (translit_mass / total_mass).min(F::one()).max(F::zero());

    trace.iterations.push(IterationStats {
        log_likelihood: ll,
        max_lattice_mismatch: mismatch,
        lambda: params.lambda,
        theta_sum: log_sum(&params.log_theta),
        src_unigram_sum: log_sum(&params.src_lu),
        tgt_unigram_sum: log_sum(&params.tgt_lu),
    });
    Ok(true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinedPair<F> {
    pub source: String,
    pub target: String,
    pub posterior: F,
}

/// Mined pairs sorted by posterior, descending.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MinedPairs<F> {
    pub pairs: Vec<MinedPair<F>>,
}

impl<F: Real> MinedPairs<F> {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MinedPair<F>> {
        self.pairs.iter()
    }

    /// Target-side word types, sorted.
    pub fn target_words(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self.pairs.iter().map(|p| p.target.as_str()).collect();
        set.into_iter().map(str::to_string).collect()
    }

    /// `source<TAB>target<TAB>posterior` per line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for p in &self.pairs {
            let _ = writeln!(out, "{}\t{}\t{}", p.source, p.target, p.posterior);
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self, MineError> {
        let mut pairs = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: &str| MineError::Format {
                line: n + 1,
                message: message.to_string(),
            };
            let fields: Vec<&str> = line.split('\t').collect();
            let [s, t, p] = fields.as_slice() else {
                return Err(err("expected source<TAB>target<TAB>posterior"));
            };
            let posterior = parse_real::<F>(p).ok_or_else(|| err("bad posterior"))?;
            if !(posterior >= F::zero() && posterior <= F::one()) {
                return Err(err("posterior outside [0, 1]"));
            }
            pairs.push(MinedPair {
                source: s.to_string(),
                target: t.to_string(),
                posterior,
            });
        }
        Ok(MinedPairs { pairs })
    }
}

/// Candidates whose transliteration posterior is at least `threshold`,
/// highest posterior first, ties ordered by source then target word.
pub fn mine_pairs<F: Real>(
    model: &TransliterationModel<F>,
    candidates: &WordPairList,
    threshold: F,
) -> Result<MinedPairs<F>, MineError> {
    if !(threshold >= F::zero() && threshold <= F::one()) {
        return Err(MineError::ThresholdOutOfRange(threshold.as_f64()));
    }
    let mut pairs: Vec<MinedPair<F>> = candidates
        .entries()
        .par_iter()
        .map(|p| MinedPair {
            source: p.source.clone(),
            target: p.target.clone(),
            posterior: posterior_translit(model, &p.source, &p.target),
        })
        .collect::<Vec<_>>()
        .into_iter()
        .filter(|p| p.posterior >= threshold)
        .collect();
    pairs.sort_by(|a, b| {
        b.posterior
            .partial_cmp(&a.posterior)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.source.cmp(&b.source))
            .then_with(|| a.target.cmp(&b.target))
    });
    Ok(MinedPairs { pairs })
}
