use super::model::TransliterationModel;
use super::multigram::{Multigram, Shape};
use super::MineError;
use crate::scalar::{log_add, Real};

/// Longest word (per side) [`enumerate_alignments`] accepts.
pub const MAX_ENUMERATION_CHARS: usize = 6;

/// Transition between prefix cells `(i, j)` of the lattice, cells numbered
/// row-major over `(|e|+1) × (|f|+1)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Edge {
    pub from: usize,
    pub to: usize,
    pub multigram: Multigram,
}

/// All multigram edges of the `e`×`f` lattice for the given shapes, ordered
/// by source cell. `to > from` holds for every edge.
pub(crate) fn lattice_edges(shapes: &[Shape], e: &[char], f: &[char]) -> Vec<Edge> {
    let cols = f.len() + 1;
    let mut edges = Vec::new();
    for i in 0..=e.len() {
        for j in 0..=f.len() {
            for s in shapes {
                let (di, dj) = (s.src as usize, s.tgt as usize);
                if i + di > e.len() || j + dj > f.len() {
                    continue;
                }
                edges.push(Edge {
                    from: i * cols + j,
                    to: (i + di) * cols + j + dj,
                    multigram: Multigram::unchecked(&e[i..i + di], &f[j..j + dj]),
                });
            }
        }
    }
    edges
}

/// Log-space forward pass; `links` are `(from, to)` cells in edge order.
pub(crate) fn forward<F: Real>(cells: usize, links: &[(usize, usize)], weights: &[F]) -> Vec<F> {
    let mut alpha = vec![F::neg_infinity(); cells];
    alpha[0] = F::zero();
    for (&(from, to), &w) in links.iter().zip(weights) {
        if w == F::neg_infinity() || alpha[from] == F::neg_infinity() {
            continue;
        }
        alpha[to] = log_add(alpha[to], alpha[from] + w);
    }
    alpha
}

pub(crate) fn backward<F: Real>(cells: usize, links: &[(usize, usize)], weights: &[F]) -> Vec<F> {
    let mut beta = vec![F::neg_infinity(); cells];
    beta[cells - 1] = F::zero();
    for (&(from, to), &w) in links.iter().zip(weights).rev() {
        if w == F::neg_infinity() || beta[to] == F::neg_infinity() {
            continue;
        }
        beta[from] = log_add(beta[from], w + beta[to]);
    }
    beta
}

/// `|α(|e|,|f|) / β(0,0) − 1|`, zero when both are zero.
pub(crate) fn relative_mismatch<F: Real>(alpha_end: F, beta_start: F) -> F {
    if alpha_end == F::neg_infinity() && beta_start == F::neg_infinity() {
        return F::zero();
    }
    (alpha_end - beta_start).exp_m1().abs()
}

/// Forward and backward log-values over all prefix pairs of a word pair.
#[derive(Debug, Clone)]
pub struct AlignmentLattice<F> {
    rows: usize,
    cols: usize,
    alpha: Vec<F>,
    beta: Vec<F>,
}

impl<F: Real> AlignmentLattice<F> {
    pub fn new(model: &TransliterationModel<F>, e: &str, f: &str) -> Self {
        let e: Vec<char> = e.chars().collect();
        let f: Vec<char> = f.chars().collect();
        let edges = lattice_edges(model.shapes(), &e, &f);
        let weights: Vec<F> = edges.iter().map(|ed| model.log_theta(&ed.multigram)).collect();
        let links: Vec<(usize, usize)> = edges.iter().map(|ed| (ed.from, ed.to)).collect();
        let cells = (e.len() + 1) * (f.len() + 1);
        AlignmentLattice {
            rows: e.len() + 1,
            cols: f.len() + 1,
            alpha: forward(cells, &links, &weights),
            beta: backward(cells, &links, &weights),
        }
    }

    /// `ln α(i, j)`: total probability of aligning `e[..i]` with `f[..j]`.
    pub fn log_alpha(&self, i: usize, j: usize) -> F {
        self.alpha[i * self.cols + j]
    }

    /// `ln β(i, j)`: total probability of aligning `e[i..]` with `f[j..]`.
    pub fn log_beta(&self, i: usize, j: usize) -> F {
        self.beta[i * self.cols + j]
    }

    pub fn log_prob(&self) -> F {
        self.log_alpha(self.rows - 1, self.cols - 1)
    }

    /// Relative disagreement between the forward and backward totals.
    pub fn mismatch(&self) -> F {
        relative_mismatch(self.log_prob(), self.log_beta(0, 0))
    }
}

/// `ln p1(e, f)`, the log of the summed probability of every alignment.
/// Forward pass only, without materializing the edge list. Each cell pulls
/// from its predecessors and combines them with a single log-sum-exp.
pub fn log_joint_prob<F: Real>(model: &TransliterationModel<F>, e: &str, f: &str) -> F {
    let e: Vec<char> = e.chars().collect();
    let f: Vec<char> = f.chars().collect();
    let cols = f.len() + 1;
    let mut alpha = vec![F::neg_infinity(); (e.len() + 1) * cols];
    alpha[0] = F::zero();
    let mut terms = [F::neg_infinity(); 5];
    for i in 0..=e.len() {
        for j in 0..=f.len() {
            if i == 0 && j == 0 {
                continue;
            }
            let mut n = 0;
            let mut max = F::neg_infinity();
            for s in model.shapes() {
                let (di, dj) = (s.src as usize, s.tgt as usize);
                if di > i || dj > j {
                    continue;
                }
                let prev = alpha[(i - di) * cols + j - dj];
                if prev == F::neg_infinity() {
                    continue;
                }
                let t = prev + model.log_theta(&Multigram::unchecked(&e[i - di..i], &f[j - dj..j]));
                if t > F::neg_infinity() {
                    terms[n] = t;
                    n += 1;
                    max = max.max(t);
                }
            }
            if n > 0 {
                let sum: F = terms[..n].iter().map(|&t| (t - max).exp()).sum();
                alpha[i * cols + j] = max + sum.ln();
            }
        }
    }
    alpha[alpha.len() - 1]
}

/// `p1(e, f) = Σ_{a ∈ Align(e,f)} Π θ(q)` over the multigrams `q` of `a`.
pub fn joint_prob<F: Real>(model: &TransliterationModel<F>, e: &str, f: &str) -> F {
    log_joint_prob(model, e, f).exp()
}

/// Every multigram sequence whose concatenation spells `e` and `f`.
/// Exponential; refuses words longer than [`MAX_ENUMERATION_CHARS`].
pub fn enumerate_alignments(e: &str, f: &str, shapes: &[Shape]) -> Result<Vec<Vec<Multigram>>, MineError> {
    let e: Vec<char> = e.chars().collect();
    let f: Vec<char> = f.chars().collect();
    if e.len() > MAX_ENUMERATION_CHARS || f.len() > MAX_ENUMERATION_CHARS {
        return Err(MineError::TooLong {
            limit: MAX_ENUMERATION_CHARS,
        });
    }
    let shapes = Shape::validate_set(shapes)?;
    let mut out = Vec::new();
    let mut path = Vec::new();
    extend(&e, &f, 0, 0, &shapes, &mut path, &mut out);
    Ok(out)
}

fn extend(
    e: &[char],
    f: &[char],
    i: usize,
    j: usize,
    shapes: &[Shape],
    path: &mut Vec<Multigram>,
    out: &mut Vec<Vec<Multigram>>,
) {
    if i == e.len() && j == f.len() {
        out.push(path.clone());
        return;
    }
    for s in shapes {
        let (di, dj) = (s.src as usize, s.tgt as usize);
        if i + di <= e.len() && j + dj <= f.len() {
            path.push(Multigram::unchecked(&e[i..i + di], &f[j..j + dj]));
            extend(e, f, i + di, j + dj, shapes, path, out);
            path.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mine::Unigram;

    fn mg(s: &str, t: &str) -> Multigram {
        Multigram::new(&s.chars().collect::<Vec<_>>(), &t.chars().collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_alignments("a", "x", &[Shape::ONE_TO_ONE]).unwrap().len(), 1);
        // (1,1) | (1,0)(0,1) | (0,1)(1,0)
        assert_eq!(enumerate_alignments("a", "x", &Shape::ALL).unwrap().len(), 3);
        // (2,1) | (1,1)(1,0) | (1,0)(1,1) | and the three orderings of (1,0)(1,0)(0,1)
        assert_eq!(enumerate_alignments("ab", "x", &Shape::ALL).unwrap().len(), 6);
    }

    #[test]
    fn enumeration_spells_both_words() {
        for a in enumerate_alignments("abc", "xy", &Shape::ALL).unwrap() {
            let s: String = a.iter().map(|m| m.src.to_string()).collect();
            let t: String = a.iter().map(|m| m.tgt.to_string()).collect();
            assert_eq!((s.as_str(), t.as_str()), ("abc", "xy"));
        }
    }

    #[test]
    fn enumeration_guard() {
        assert_eq!(
            enumerate_alignments("abcdefg", "x", &Shape::ALL),
            Err(MineError::TooLong { limit: 6 })
        );
    }

    #[test]
    fn forced_alignment_probability_one() {
        let m = TransliterationModel::new(
            &Shape::ALL,
            [(mg("a", "x"), 1.0f64)],
            0.5,
            Unigram::uniform(['a']),
            Unigram::uniform(['x']),
        )
        .unwrap();
        assert_eq!(joint_prob(&m, "a", "x"), 1.0);
        assert_eq!(joint_prob(&m, "b", "x"), 0.0);
        assert_eq!(joint_prob(&m, "aa", "x"), 0.0);
        let lat = AlignmentLattice::new(&m, "aa", "xx");
        assert_eq!(lat.log_alpha(0, 0), 0.0);
        assert_eq!(lat.log_prob(), 0.0);
        assert_eq!(lat.mismatch(), 0.0);
    }

    #[test]
    fn unseen_mass_smooths() {
        let m = TransliterationModel::new(
            &[Shape::ONE_TO_ONE],
            [(mg("a", "x"), 1.0f64)],
            0.5,
            Unigram::uniform(['a']),
            Unigram::uniform(['x']),
        )
        .unwrap()
        .with_unseen_multigram_prob(0.01);
        assert!((joint_prob(&m, "ab", "xy") - 0.01).abs() < 1e-15);
    }
}
