use std::collections::HashMap;

use super::{EvalError, MatchOptions};

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if n > 0 && tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    counts
}

/// (clipped matches, hypothesis n-gram count) against several references.
fn clipped_counts(hyp: &[String], refs: &[Vec<String>], n: usize) -> (usize, usize) {
    let hyp_counts = ngram_counts(hyp, n);
    let mut max_ref: HashMap<&[String], usize> = HashMap::new();
    for r in refs {
        for (g, c) in ngram_counts(r, n) {
            let slot = max_ref.entry(g).or_insert(0);
            *slot = (*slot).max(c);
        }
    }
    let matched = hyp_counts
        .iter()
        .map(|(g, &c)| c.min(max_ref.get(g).copied().unwrap_or(0)))
        .sum();
    (matched, hyp.len().saturating_sub(n - 1))
}

/// Hypothesis n-grams found in some reference, each clipped to its largest
/// count in a single reference, over the number of hypothesis n-grams.
pub fn clipped_ngram_precision<H: AsRef<str>, R: AsRef<str>>(
    hyp: &[H],
    refs: &[Vec<R>],
    n: usize,
    opts: &MatchOptions,
) -> Result<f64, EvalError> {
    if n == 0 {
        return Err(EvalError::InvalidOrder);
    }
    if refs.is_empty() {
        return Err(EvalError::NoReferences);
    }
    let hyp = opts.prepare(hyp);
    let refs: Vec<Vec<String>> = refs.iter().map(|r| opts.prepare(r)).collect();
    let (m, total) = clipped_counts(&hyp, &refs, n);
    Ok(if total == 0 { 0.0 } else { m as f64 / total as f64 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BleuScore {
    pub score: f64,
    pub precisions: Vec<f64>,
    pub brevity_penalty: f64,
    pub hyp_len: usize,
    pub ref_len: usize,
}

/// Corpus BLEU: geometric mean of corpus-level clipped precisions for
/// orders `1..=max_n`, times `exp(min(0, 1 - r/c))` where `r` sums the
/// reference length closest to each hypothesis (shorter on ties).
pub fn bleu<H: AsRef<str>, R: AsRef<str>>(
    hyps: &[Vec<H>],
    refs: &[Vec<Vec<R>>],
    max_n: usize,
    opts: &MatchOptions,
) -> Result<BleuScore, EvalError> {
    if max_n == 0 {
        return Err(EvalError::InvalidOrder);
    }
    if hyps.len() != refs.len() {
        return Err(EvalError::LengthMismatch {
            hyps: hyps.len(),
            refs: refs.len(),
        });
    }
    let mut matched = vec![0usize; max_n];
    let mut totals = vec![0usize; max_n];
    let (mut c, mut r) = (0usize, 0usize);
    for (h, rs) in hyps.iter().zip(refs) {
        if rs.is_empty() {
            return Err(EvalError::NoReferences);
        }
        let h = opts.prepare(h);
        let rs: Vec<Vec<String>> = rs.iter().map(|x| opts.prepare(x)).collect();
        for n in 1..=max_n {
            let (m, t) = clipped_counts(&h, &rs, n);
            matched[n - 1] += m;
            totals[n - 1] += t;
        }
        c += h.len();
        r += rs
            .iter()
            .map(Vec::len)
            .min_by_key(|&l| (l.abs_diff(h.len()), l))
            .unwrap_or(0);
    }
    let precisions: Vec<f64> = matched
        .iter()
        .zip(&totals)
        .map(|(&m, &t)| if t == 0 { 0.0 } else { m as f64 / t as f64 })
        .collect();
    let brevity_penalty = if c == 0 {
        0.0
    } else {
        (1.0 - r as f64 / c as f64).min(0.0).exp()
    };
    let score = if precisions.contains(&0.0) {
        0.0
    } else {
        let mean_log = precisions.iter().map(|p| p.ln()).sum::<f64>() / max_n as f64;
        (brevity_penalty * mean_log.exp()).min(1.0)
    };
    Ok(BleuScore {
        score,
        precisions,
        brevity_penalty,
        hyp_len: c,
        ref_len: r,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeteorPenalty {
    /// `0.5 · C / Mu`
    Linear,
    /// `0.5 · (C / Mu)³`
    Cubed,
}

/// Counts behind one METEOR value; sums of these give corpus METEOR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MeteorStats {
    pub matches: usize,
    pub chunks: usize,
    pub hyp_len: usize,
    pub ref_len: usize,
}

impl std::ops::Add for MeteorStats {
    type Output = MeteorStats;

    fn add(self, o: MeteorStats) -> MeteorStats {
        MeteorStats {
            matches: self.matches + o.matches,
            chunks: self.chunks + o.chunks,
            hyp_len: self.hyp_len + o.hyp_len,
            ref_len: self.ref_len + o.ref_len,
        }
    }
}

impl MeteorStats {
    pub fn score(&self, penalty: MeteorPenalty) -> f64 {
        if self.matches == 0 {
            return 0.0;
        }
        let m = self.matches as f64;
        let p = m / self.hyp_len as f64;
        let r = m / self.ref_len as f64;
        let fmean = 10.0 * p * r / (r + 9.0 * p);
        let frag = self.chunks as f64 / m;
        let pm = match penalty {
            MeteorPenalty::Linear => 0.5 * frag,
            MeteorPenalty::Cubed => 0.5 * frag.powi(3),
        };
        fmean * (1.0 - pm)
    }
}

/// Exact-match unigram alignment. Each hypothesis token takes the reference
/// position right after the previous match when possible, otherwise the
/// earliest unused equal token; chunks are maximal runs adjacent on both
/// sides.
pub fn meteor_stats<H: AsRef<str>, R: AsRef<str>>(hyp: &[H], reference: &[R], opts: &MatchOptions) -> MeteorStats {
    let hyp = opts.prepare(hyp);
    let reference = opts.prepare(reference);
    let mut used = vec![false; reference.len()];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (i, w) in hyp.iter().enumerate() {
        let follow = pairs
            .last()
            .filter(|&&(pi, _)| pi + 1 == i)
            .map(|&(_, pj)| pj + 1)
            .filter(|&j| j < reference.len() && !used[j] && reference[j] == *w);
        let j = follow.or_else(|| (0..reference.len()).find(|&j| !used[j] && reference[j] == *w));
        if let Some(j) = j {
            used[j] = true;
            pairs.push((i, j));
        }
    }
    let chunks = pairs
        .iter()
        .enumerate()
        .filter(|&(k, &(i, j))| k == 0 || pairs[k - 1] != (i.wrapping_sub(1), j.wrapping_sub(1)))
        .count();
    MeteorStats {
        matches: pairs.len(),
        chunks,
        hyp_len: hyp.len(),
        ref_len: reference.len(),
    }
}

/// `10PR / (R + 9P) · (1 - Pm)`, zero without matches.
pub fn meteor<H: AsRef<str>, R: AsRef<str>>(
    hyp: &[H],
    reference: &[R],
    opts: &MatchOptions,
    penalty: MeteorPenalty,
) -> f64 {
    meteor_stats(hyp, reference, opts).score(penalty)
}

/// Multiset unigram overlap as (precision, recall, F1).
pub fn prf<H: AsRef<str>, R: AsRef<str>>(hyp: &[H], reference: &[R], opts: &MatchOptions) -> (f64, f64, f64) {
    let (m, h, r) = overlap(hyp, reference, opts);
    prf_from_counts(m, h, r)
}

pub(crate) fn overlap<H: AsRef<str>, R: AsRef<str>>(
    hyp: &[H],
    reference: &[R],
    opts: &MatchOptions,
) -> (usize, usize, usize) {
    let hyp = opts.prepare(hyp);
    let reference = opts.prepare(reference);
    let (m, _) = clipped_counts(&hyp, std::slice::from_ref(&reference), 1);
    (m, hyp.len(), reference.len())
}

pub(crate) fn prf_from_counts(m: usize, h: usize, r: usize) -> (f64, f64, f64) {
    let p = if h == 0 { 0.0 } else { m as f64 / h as f64 };
    let rc = if r == 0 { 0.0 } else { m as f64 / r as f64 };
    let f = if p + rc == 0.0 { 0.0 } else { 2.0 * p * rc / (p + rc) };
    (p, rc, f)
}
