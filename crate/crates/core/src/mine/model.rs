use std::collections::BTreeMap;
use std::fmt::Write as _;

use rustc_hash::FxHashMap;

use super::lattice::log_joint_prob;
use super::multigram::{Multigram, Segment, Shape};
use super::MineError;
use crate::scalar::{log_add, parse_real, safe_ln, Real};

/// Probability given to each character the unigram model has never seen.
pub const UNSEEN_CHAR_PROB: f64 = 1e-9;

/// Character unigram distribution in log space.
#[derive(Debug, Clone, PartialEq)]
pub struct Unigram<F> {
    log_probs: BTreeMap<char, F>,
}

impl<F: Real> Unigram<F> {
    /// Normalizes non-negative weights into a distribution.
    pub fn from_weights<I: IntoIterator<Item = (char, F)>>(weights: I) -> Self {
        let mut acc: BTreeMap<char, F> = BTreeMap::new();
        for (c, w) in weights {
            *acc.entry(c).or_insert_with(F::zero) += w;
        }
        let total: F = acc.values().copied().sum();
        Unigram {
            log_probs: acc
                .into_iter()
                .map(|(c, w)| (c, if total > F::zero() { safe_ln(w / total) } else { F::neg_infinity() }))
                .collect(),
        }
    }

    pub(crate) fn from_log_probs(log_probs: BTreeMap<char, F>) -> Self {
        Unigram { log_probs }
    }

    pub fn uniform<I: IntoIterator<Item = char>>(alphabet: I) -> Self {
        Self::from_weights(alphabet.into_iter().map(|c| (c, F::one())))
    }

    /// Characters outside the alphabet are floored at [`UNSEEN_CHAR_PROB`].
    pub fn log_prob(&self, c: char) -> F {
        self.log_probs
            .get(&c)
            .copied()
            .unwrap_or_else(|| F::of(UNSEEN_CHAR_PROB).ln())
    }

    pub fn contains(&self, c: char) -> bool {
        self.log_probs.contains_key(&c)
    }

    pub fn alphabet(&self) -> impl Iterator<Item = char> + '_ {
        self.log_probs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.log_probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_probs.is_empty()
    }

    pub fn total(&self) -> F {
        self.log_probs.values().map(|lp| lp.exp()).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (char, F)> + '_ {
        self.log_probs.iter().map(|(&c, &lp)| (c, lp))
    }
}

/// Joint multigram distribution, mixture prior and the two unigram
/// models of the non-transliteration component.
#[derive(Debug, Clone)]
pub struct TransliterationModel<F> {
    shapes: Vec<Shape>,
    multigrams: Vec<Multigram>,
    index: FxHashMap<Multigram, usize>,
    log_theta: Vec<F>,
    lambda: F,
    src_unigrams: Unigram<F>,
    tgt_unigrams: Unigram<F>,
    unseen_log_prob: F,
    by_source: FxHashMap<Segment, Vec<(Segment, F)>>,
}

fn tolerance<F: Real>() -> F {
    // f32 cannot hold sums to 1e-9
    F::of(1e-6).max(F::epsilon() * F::of(64.0))
}

fn check_sum<F: Real>(what: &str, sum: F) -> Result<(), MineError> {
    if (sum - F::one()).abs() > tolerance::<F>() || sum.is_nan() {
        return Err(MineError::NotNormalized {
            what: what.to_string(),
            sum: sum.as_f64(),
        });
    }
    Ok(())
}

impl<F: Real> TransliterationModel<F> {
    /// Builds a model from multigram probabilities. Every distribution must
    /// already sum to one.
    pub fn new<I>(
        shapes: &[Shape],
        theta: I,
        lambda: F,
        src_unigrams: Unigram<F>,
        tgt_unigrams: Unigram<F>,
    ) -> Result<Self, MineError>
    where
        I: IntoIterator<Item = (Multigram, F)>,
    {
        let log_theta = theta.into_iter().map(|(m, p)| (m, safe_ln(p)));
        Self::from_log_parts(shapes, log_theta, lambda, src_unigrams, tgt_unigrams)
    }

    pub(crate) fn from_log_parts<I>(
        shapes: &[Shape],
        log_theta: I,
        lambda: F,
        src_unigrams: Unigram<F>,
        tgt_unigrams: Unigram<F>,
    ) -> Result<Self, MineError>
    where
        I: IntoIterator<Item = (Multigram, F)>,
    {
        let shapes = Shape::validate_set(shapes)?;
        if !(lambda >= F::zero() && lambda <= F::one()) {
            return Err(MineError::LambdaOutOfRange(lambda.as_f64()));
        }
        let mut entries: BTreeMap<Multigram, F> = BTreeMap::new();
        for (m, lp) in log_theta {
            if !shapes.contains(&m.shape()) {
                return Err(MineError::InvalidShape(m.shape().src, m.shape().tgt));
            }
            let slot = entries.entry(m).or_insert_with(F::neg_infinity);
            *slot = log_add(*slot, lp);
        }
        let model = Self::assemble(shapes, entries, lambda, src_unigrams, tgt_unigrams);
        check_sum("theta", model.theta_sum())?;
        if !model.src_unigrams.is_empty() {
            check_sum("source unigrams", model.src_unigrams.total())?;
        }
        if !model.tgt_unigrams.is_empty() {
            check_sum("target unigrams", model.tgt_unigrams.total())?;
        }
        Ok(model)
    }

    /// No normalization checks; EM calls this after its own M-step.
    pub(crate) fn assemble(
        shapes: Vec<Shape>,
        entries: BTreeMap<Multigram, F>,
        lambda: F,
        src_unigrams: Unigram<F>,
        tgt_unigrams: Unigram<F>,
    ) -> Self {
        let multigrams: Vec<Multigram> = entries.keys().copied().collect();
        let log_theta: Vec<F> = entries.values().copied().collect();
        let index = multigrams.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut by_source: FxHashMap<Segment, Vec<(Segment, F)>> = FxHashMap::default();
        for (m, &lp) in multigrams.iter().zip(&log_theta) {
            if lp > F::neg_infinity() {
                by_source.entry(m.src).or_default().push((m.tgt, lp));
            }
        }
        TransliterationModel {
            shapes,
            multigrams,
            index,
            log_theta,
            lambda,
            src_unigrams,
            tgt_unigrams,
            unseen_log_prob: F::neg_infinity(),
            by_source,
        }
    }

    /// Gives every multigram absent from theta probability `p` (zero by
    /// default). The resulting model is deficient by design of the caller.
    pub fn with_unseen_multigram_prob(mut self, p: F) -> Self {
        self.unseen_log_prob = safe_ln(p);
        self
    }

    pub fn shapes(&self) -> &[Shape] {
        &self.shapes
    }

    pub fn lambda(&self) -> F {
        self.lambda
    }

    pub fn src_unigrams(&self) -> &Unigram<F> {
        &self.src_unigrams
    }

    pub fn tgt_unigrams(&self) -> &Unigram<F> {
        &self.tgt_unigrams
    }

    pub fn multigrams(&self) -> impl Iterator<Item = (Multigram, F)> + '_ {
        self.multigrams.iter().copied().zip(self.log_theta.iter().copied())
    }

    pub fn num_multigrams(&self) -> usize {
        self.multigrams.len()
    }

    pub fn log_theta(&self, m: &Multigram) -> F {
        match self.index.get(m) {
            Some(&i) => self.log_theta[i],
            None => self.unseen_log_prob,
        }
    }

    pub fn theta(&self, m: &Multigram) -> F {
        self.log_theta(m).exp()
    }

    pub fn theta_sum(&self) -> F {
        self.log_theta.iter().map(|lp| lp.exp()).sum()
    }

    /// Target segments with non-zero probability for a source segment.
    pub fn expansions(&self, src: &Segment) -> &[(Segment, F)] {
        self.by_source.get(src).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Characters appearing on the target side of a non-zero multigram.
    pub fn target_alphabet(&self) -> Vec<char> {
        let mut chars: Vec<char> = self
            .multigrams()
            .filter(|(_, lp)| *lp > F::neg_infinity())
            .flat_map(|(m, _)| m.tgt.chars().to_vec())
            .collect();
        chars.sort_unstable();
        chars.dedup();
        chars
    }

    /// Line-oriented TSV: a header with lambda and alphabet sizes, then
    /// `T` rows for theta and `U` rows for the unigram models.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = write!(
            out,
            "lambda={}\tsrc_alphabet={}\ttgt_alphabet={}",
            self.lambda,
            self.src_unigrams.len(),
            self.tgt_unigrams.len()
        );
        if self.unseen_log_prob > F::neg_infinity() {
            let _ = write!(out, "\tunseen={}", self.unseen_log_prob);
        }
        out.push('\n');
        for (m, lp) in self.multigrams() {
            let _ = writeln!(out, "T\t{}\t{}\t{}", m.src, m.tgt, lp);
        }
        for (side, uni) in [("src", &self.src_unigrams), ("tgt", &self.tgt_unigrams)] {
            for (c, lp) in uni.iter() {
                let _ = writeln!(out, "U\t{side}\t{c}\t{lp}");
            }
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self, MineError> {
        let fail = |line: usize, message: &str| MineError::Format {
            line,
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| fail(1, "missing header"))?;
        let mut lambda = None;
        let mut sizes = (None, None);
        let mut unseen = F::neg_infinity();
        for field in header.split('\t') {
            let (k, v) = field.split_once('=').ok_or_else(|| fail(1, "header field without '='"))?;
            match k {
                "lambda" => lambda = parse_real::<F>(v),
                "src_alphabet" => sizes.0 = v.parse::<usize>().ok(),
                "tgt_alphabet" => sizes.1 = v.parse::<usize>().ok(),
                "unseen" => unseen = parse_real::<F>(v).ok_or_else(|| fail(1, "bad unseen value"))?,
                _ => return Err(fail(1, &format!("unknown header key {k:?}"))),
            }
        }
        let lambda = lambda.ok_or_else(|| fail(1, "missing lambda"))?;
        let mut theta = Vec::new();
        let mut src_u = BTreeMap::new();
        let mut tgt_u = BTreeMap::new();
        for (n, line) in lines {
            let ln = n + 1;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match fields.as_slice() {
                ["T", s, t, lp] => {
                    let s: Vec<char> = s.chars().collect();
                    let t: Vec<char> = t.chars().collect();
                    let m = Multigram::new(&s, &t).map_err(|e| fail(ln, &e.to_string()))?;
                    let lp = parse_real::<F>(lp).ok_or_else(|| fail(ln, "bad log-probability"))?;
                    theta.push((m, lp));
                }
                ["U", side, c, lp] => {
                    let mut chars = c.chars();
                    let (Some(ch), None) = (chars.next(), chars.next()) else {
                        return Err(fail(ln, "unigram key must be one character"));
                    };
                    let lp = parse_real::<F>(lp).ok_or_else(|| fail(ln, "bad log-probability"))?;
                    match *side {
                        "src" => src_u.insert(ch, lp),
                        "tgt" => tgt_u.insert(ch, lp),
                        _ => return Err(fail(ln, "unigram side must be src or tgt")),
                    };
                }
                _ => return Err(fail(ln, "expected a T or U row")),
            }
        }
        if sizes.0.is_some_and(|n| n != src_u.len()) || sizes.1.is_some_and(|n| n != tgt_u.len()) {
            return Err(fail(1, "alphabet sizes disagree with unigram rows"));
        }
        let mut shapes: Vec<Shape> = theta.iter().map(|(m, _)| m.shape()).collect();
        shapes.sort();
        shapes.dedup();
        if shapes.is_empty() {
            return Err(fail(1, "model has no theta rows"));
        }
        let mut model = Self::from_log_parts(
            &shapes,
            theta,
            lambda,
            Unigram::from_log_probs(src_u),
            Unigram::from_log_probs(tgt_u),
        )?;
        model.unseen_log_prob = unseen;
        Ok(model)
    }
}

/// `Π p_src(e_i) · Π p_tgt(f_j)` in log space.
pub fn log_nontranslit_prob<F: Real>(model: &TransliterationModel<F>, e: &str, f: &str) -> F {
    let s: F = e.chars().map(|c| model.src_unigrams.log_prob(c)).sum();
    let t: F = f.chars().map(|c| model.tgt_unigrams.log_prob(c)).sum();
    s + t
}

pub fn nontranslit_prob<F: Real>(model: &TransliterationModel<F>, e: &str, f: &str) -> F {
    log_nontranslit_prob(model, e, f).exp()
}

/// `λ·p1 / (λ·p1 + (1−λ)·p_ntr)` with `0/0` mapped to zero.
pub fn posterior_translit<F: Real>(model: &TransliterationModel<F>, e: &str, f: &str) -> F {
    posterior_from_logs(model.lambda, log_joint_prob(model, e, f), log_nontranslit_prob(model, e, f))
}

pub(crate) fn posterior_from_logs<F: Real>(lambda: F, log_p1: F, log_ntr: F) -> F {
    let a = safe_ln(lambda) + log_p1;
    let b = safe_ln(F::one() - lambda) + log_ntr;
    let denom = log_add(a, b);
    if denom == F::neg_infinity() || a == F::neg_infinity() {
        return F::zero();
    }
    (a - denom).exp().min(F::one())
}
