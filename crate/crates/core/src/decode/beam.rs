use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use super::lm::{LmState, NGramLM};
use super::DecodeError;
use crate::mine::{Segment, TransliterationModel};
use crate::scalar::{parse_real, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct BeamConfig {
    pub beam_width: usize,
    pub nbest: usize,
    pub tm_weight: f64,
    pub lm_weight: f64,
    /// Output length is capped at `floor(ratio · |source|)` characters.
    pub max_length_ratio: f64,
}

impl Default for BeamConfig {
    fn default() -> Self {
        BeamConfig {
            beam_width: 16,
            nbest: 10,
            tm_weight: 1.0,
            lm_weight: 0.5,
            max_length_ratio: 3.0,
        }
    }
}

impl BeamConfig {
    pub fn validate(&self) -> Result<(), DecodeError> {
        let bad = |m: &str| Err(DecodeError::InvalidConfig(m.to_string()));
        if self.beam_width == 0 {
            return bad("beam width must be at least 1");
        }
        if self.nbest == 0 {
            return bad("n-best size must be at least 1");
        }
        if !(self.tm_weight >= 0.0 && self.lm_weight >= 0.0) {
            return bad("weights must be non-negative");
        }
        if self.max_length_ratio.is_nan() || self.max_length_ratio <= 0.0 {
            return bad("length ratio must be positive");
        }
        Ok(())
    }

    pub fn max_output_len(&self, source_len: usize) -> usize {
        (self.max_length_ratio * source_len as f64).floor() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate<F> {
    pub text: String,
    /// Log-probability of the best multigram path producing `text`.
    pub tm_score: F,
    /// Character LM log-probability of `text` including the end token.
    pub lm_score: F,
    pub combined: F,
}

/// Higher score first, then shorter, then lexicographically smaller.
pub(crate) fn rank<F: Real>(a: &Candidate<F>, b: &Candidate<F>) -> Ordering {
    b.combined
        .partial_cmp(&a.combined)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.text.chars().count().cmp(&b.text.chars().count()))
        .then_with(|| a.text.cmp(&b.text))
}

/// Ranked, deduplicated candidates capped at a fixed capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct NBestList<F> {
    items: Vec<Candidate<F>>,
    capacity: usize,
    oov_failure: bool,
}

impl<F: Real> NBestList<F> {
    pub fn new(capacity: usize) -> Self {
        NBestList {
            items: Vec::new(),
            capacity: capacity.max(1),
            oov_failure: false,
        }
    }

    /// Keeps the better-ranked copy of a duplicate candidate string.
    pub fn insert(&mut self, cand: Candidate<F>) {
        if let Some(pos) = self.items.iter().position(|c| c.text == cand.text) {
            if rank(&cand, &self.items[pos]) == Ordering::Less {
                self.items.remove(pos);
            } else {
                return;
            }
        }
        let at = self
            .items
            .binary_search_by(|probe| rank(probe, &cand))
            .unwrap_or_else(|e| e);
        self.items.insert(at, cand);
        self.items.truncate(self.capacity);
    }

    pub fn items(&self) -> &[Candidate<F>] {
        &self.items
    }

    pub fn best(&self) -> Option<&Candidate<F>> {
        self.items.first()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Set when no hypothesis covered the whole source word.
    pub fn oov_failure(&self) -> bool {
        self.oov_failure
    }

    /// `source<TAB>rank<TAB>candidate<TAB>tm<TAB>lm<TAB>combined`, ranks from 1.
    pub fn to_tsv(&self, source: &str) -> String {
        let mut out = String::new();
        for (r, c) in self.items.iter().enumerate() {
            let _ = writeln!(
                out,
                "{source}\t{}\t{}\t{}\t{}\t{}",
                r + 1,
                c.text,
                c.tm_score,
                c.lm_score,
                c.combined
            );
        }
        out
    }

    /// Parses n-best TSV into per-source lists, in first-appearance order.
    pub fn from_tsv(text: &str) -> Result<Vec<(String, NBestList<F>)>, DecodeError> {
        let mut out: Vec<(String, NBestList<F>)> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fail = |m: &str| DecodeError::Format {
                line: n + 1,
                message: m.to_string(),
            };
            let fields: Vec<&str> = line.split('\t').collect();
            let [src, _rank, cand, tm, lm, comb] = fields.as_slice() else {
                return Err(fail("expected 6 tab-separated fields"));
            };
            let num = |s: &str| parse_real::<F>(s).ok_or_else(|| fail("bad score"));
            let c = Candidate {
                text: cand.to_string(),
                tm_score: num(tm)?,
                lm_score: num(lm)?,
                combined: num(comb)?,
            };
            match out.iter_mut().find(|(s, _)| s == src) {
                Some((_, list)) => {
                    list.capacity += 1;
                    list.insert(c);
                }
                None => {
                    let mut list = NBestList::new(1);
                    list.insert(c);
                    out.push((src.to_string(), list));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone)]
struct Hyp<F> {
    pos: usize,
    output: String,
    out_len: usize,
    tm: F,
    lm: F,
    state: LmState<char>,
}

/// Monotonic left-to-right beam search. Hypotheses consume 0–2 source
/// characters per multigram; stacks are indexed by consumed source plus
/// emitted target characters, so every expansion moves to a later stack.
/// Hypotheses with the same coverage and output are recombined, and stacks
/// are pruned on `w_tm · (tm + best remaining tm) + w_lm · lm prefix`.
pub fn transliterate<F: Real>(
    model: &TransliterationModel<F>,
    lm: &NGramLM<char, F>,
    source: &str,
    cfg: &BeamConfig,
) -> Result<NBestList<F>, DecodeError> {
    cfg.validate()?;
    let e: Vec<char> = source.chars().collect();
    if e.is_empty() {
        return Err(DecodeError::EmptySource);
    }
    let n = e.len();
    let max_out = cfg.max_output_len(n);
    let (w_tm, w_lm) = (F::of(cfg.tm_weight), F::of(cfg.lm_weight));

    // upper bound on the tm score still obtainable from each position
    let mut future = vec![F::neg_infinity(); n + 1];
    future[n] = F::zero();
    for i in (0..n).rev() {
        for len in 1..=2.min(n - i) {
            let Some(seg) = Segment::new(&e[i..i + len]) else { continue };
            let best = model
                .expansions(&seg)
                .iter()
                .map(|&(_, lp)| lp)
                .fold(F::neg_infinity(), F::max);
            future[i] = future[i].max(best + future[i + len]);
        }
    }

    let mut stacks: Vec<HashMap<(usize, String), Hyp<F>>> = vec![HashMap::new(); n + max_out + 1];
    stacks[0].insert(
        (0, String::new()),
        Hyp {
            pos: 0,
            output: String::new(),
            out_len: 0,
            tm: F::zero(),
            lm: F::zero(),
            state: lm.start(),
        },
    );
    let mut nbest = NBestList::new(cfg.nbest);
    for k in 0..stacks.len() {
        let stack = std::mem::take(&mut stacks[k]);
        let mut hyps: Vec<(F, Hyp<F>)> = stack
            .into_values()
            .filter(|h| future[h.pos] > F::neg_infinity())
            .map(|h| (w_tm * (h.tm + future[h.pos]) + w_lm * h.lm, h))
            .collect();
        hyps.sort_by(|a, b| {
            b.0.partial_cmp(&a.0)
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.1.out_len.cmp(&b.1.out_len))
                .then_with(|| a.1.output.cmp(&b.1.output))
                .then_with(|| a.1.pos.cmp(&b.1.pos))
        });
        hyps.truncate(cfg.beam_width);

        for (_, h) in hyps {
            if h.pos == n {
                let lm_score = h.lm + lm.score_end(&h.state);
                nbest.insert(Candidate {
                    text: h.output.clone(),
                    tm_score: h.tm,
                    lm_score,
                    combined: w_tm * h.tm + w_lm * lm_score,
                });
            }
            for src_len in 0..=2usize.min(n - h.pos) {
                let seg = Segment::new(&e[h.pos..h.pos + src_len]).expect("short segment");
                for &(tgt, lp) in model.expansions(&seg) {
                    if h.out_len + tgt.len() > max_out {
                        continue;
                    }
                    let mut next = Hyp {
                        pos: h.pos + src_len,
                        output: h.output.clone(),
                        out_len: h.out_len + tgt.len(),
                        tm: h.tm + lp,
                        lm: h.lm,
                        state: h.state.clone(),
                    };
                    for &c in tgt.chars() {
                        let (lp_c, st) = lm.score(&next.state, &c);
                        next.lm += lp_c;
                        next.state = st;
                        next.output.push(c);
                    }
                    let slot = &mut stacks[k + src_len + tgt.len()];
                    let key = (next.pos, next.output.clone());
                    match slot.get(&key) {
                        Some(existing) if existing.tm >= next.tm => {}
                        _ => {
                            slot.insert(key, next);
                        }
                    }
                }
            }
        }
    }
    nbest.oov_failure = nbest.is_empty();
    Ok(nbest)
}
