use super::beam::{rank, BeamConfig, Candidate};
use super::lm::{LmState, NGramLM};
use super::DecodeError;
use crate::mine::{Segment, TransliterationModel};
use crate::scalar::Real;

pub const MAX_ORACLE_ALPHABET: usize = 4;
pub const MAX_ORACLE_LEN: usize = 12;

/// Scores every target string up to the configured length over the model's
/// target alphabet and returns the best under the decoder objective. Only
/// usable on tiny problems; intended as a reference for the beam search.
pub fn exhaustive_oracle<F: Real>(
    model: &TransliterationModel<F>,
    lm: &NGramLM<char, F>,
    source: &str,
    cfg: &BeamConfig,
) -> Result<Option<Candidate<F>>, DecodeError> {
    cfg.validate()?;
    let e: Vec<char> = source.chars().collect();
    if e.is_empty() {
        return Err(DecodeError::EmptySource);
    }
    let alphabet = model.target_alphabet();
    let max_len = cfg.max_output_len(e.len());
    if alphabet.len() > MAX_ORACLE_ALPHABET || max_len > MAX_ORACLE_LEN {
        return Err(DecodeError::OracleBounds {
            max_alphabet: MAX_ORACLE_ALPHABET,
            max_len: MAX_ORACLE_LEN,
        });
    }
    let search = Search {
        model,
        lm,
        e,
        alphabet,
        max_len,
        w_tm: F::of(cfg.tm_weight),
        w_lm: F::of(cfg.lm_weight),
    };
    let first = search.column(&[], None, None);
    let mut best = None;
    let mut out = Vec::new();
    search.visit(&mut out, None, first, F::zero(), lm.start(), &mut best);
    Ok(best)
}

struct Search<'a, F> {
    model: &'a TransliterationModel<F>,
    lm: &'a NGramLM<char, F>,
    e: Vec<char>,
    alphabet: Vec<char>,
    max_len: usize,
    w_tm: F,
    w_lm: F,
}

impl<F: Real> Search<'_, F> {
    fn theta(&self, src: &[char], tgt: &[char]) -> F {
        let (Some(s), Some(t)) = (Segment::new(src), Segment::new(tgt)) else {
            return F::neg_infinity();
        };
        self.model
            .expansions(&s)
            .iter()
            .find(|(seg, _)| *seg == t)
            .map_or(F::neg_infinity(), |&(_, lp)| lp)
    }

    /// Viterbi column for target prefix `f`: entry `i` is the best path
    /// score aligning `e[..i]` with all of `f`.
    fn column(&self, f: &[char], prev: Option<&[F]>, prev2: Option<&[F]>) -> Vec<F> {
        let n = self.e.len();
        let mut col = vec![F::neg_infinity(); n + 1];
        let j = f.len();
        for i in 0..=n {
            let mut best = if i == 0 && j == 0 { F::zero() } else { F::neg_infinity() };
            for s in 0..=2.min(i) {
                let src = &self.e[i - s..i];
                if let Some(p) = prev {
                    best = best.max(p[i - s] + self.theta(src, &f[j - 1..]));
                }
                if let Some(p) = prev2 {
                    best = best.max(p[i - s] + self.theta(src, &f[j - 2..]));
                }
                if s > 0 {
                    best = best.max(col[i - s] + self.theta(src, &[]));
                }
            }
            col[i] = best;
        }
        col
    }

    fn visit(
        &self,
        out: &mut Vec<char>,
        prev: Option<&[F]>,
        col: Vec<F>,
        lm_prefix: F,
        state: LmState<char>,
        best: &mut Option<Candidate<F>>,
    ) {
        let tm = col[self.e.len()];
        if tm > F::neg_infinity() {
            let lm_score = lm_prefix + self.lm.score_end(&state);
            let cand = Candidate {
                text: out.iter().collect(),
                tm_score: tm,
                lm_score,
                combined: self.w_tm * tm + self.w_lm * lm_score,
            };
            if best.as_ref().is_none_or(|b| rank(&cand, b).is_lt()) {
                *best = Some(cand);
            }
        }
        if out.len() == self.max_len {
            return;
        }
        for &c in &self.alphabet {
            out.push(c);
            let next = self.column(out, Some(&col), prev);
            let (lp, next_state) = self.lm.score(&state, &c);
            self.visit(out, Some(&col), next, lm_prefix + lp, next_state, best);
            out.pop();
        }
    }
}
