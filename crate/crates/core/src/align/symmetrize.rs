use std::fmt;
use std::str::FromStr;

use super::{AlignError, AlignmentLinkSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Symmetrization {
    Intersection,
    Union,
    #[default]
    GrowDiag,
    GrowDiagFinal,
}

impl FromStr for Symmetrization {
    type Err = AlignError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" | "intersection" => Ok(Symmetrization::Intersection),
            "union" => Ok(Symmetrization::Union),
            "grow-diag" => Ok(Symmetrization::GrowDiag),
            "grow-diag-final" => Ok(Symmetrization::GrowDiagFinal),
            other => Err(AlignError::UnknownHeuristic(other.to_string())),
        }
    }
}

impl fmt::Display for Symmetrization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetrization::Intersection => "intersection",
            Symmetrization::Union => "union",
            Symmetrization::GrowDiag => "grow-diag",
            Symmetrization::GrowDiagFinal => "grow-diag-final",
        })
    }
}

const NEIGHBORS: [(isize, isize); 8] = [
    (-1, 0),
    (0, -1),
    (1, 0),
    (0, 1),
    (-1, -1),
    (-1, 1),
    (1, -1),
    (1, 1),
];

/// Combines a source→target and a target→source alignment (both expressed
/// in source/target index order) for the same sentence pair.
pub fn symmetrize(
    fwd: &AlignmentLinkSet,
    bwd: &AlignmentLinkSet,
    heuristic: Symmetrization,
) -> AlignmentLinkSet {
    let inter = fwd.intersection(bwd);
    let union = fwd.union(bwd);
    match heuristic {
        Symmetrization::Intersection => inter,
        Symmetrization::Union => union,
        Symmetrization::GrowDiag => grow_diag(inter, &union),
        Symmetrization::GrowDiagFinal => {
            let grown = grow_diag(inter, &union);
            final_stage(grown, &union)
        }
    }
}

struct Coverage {
    src: Vec<bool>,
    tgt: Vec<bool>,
}

impl Coverage {
    fn of(set: &AlignmentLinkSet) -> Self {
        let mut c = Coverage {
            src: vec![false; set.src_len()],
            tgt: vec![false; set.tgt_len()],
        };
        for (i, j) in set.iter() {
            c.mark(i, j);
        }
        c
    }

    fn mark(&mut self, i: usize, j: usize) {
        self.src[i] = true;
        self.tgt[j] = true;
    }

    fn either_free(&self, i: usize, j: usize) -> bool {
        !self.src[i] || !self.tgt[j]
    }
}

fn grow_diag(mut alignment: AlignmentLinkSet, union: &AlignmentLinkSet) -> AlignmentLinkSet {
    let (n, m) = (alignment.src_len(), alignment.tgt_len());
    let mut cov = Coverage::of(&alignment);
    loop {
        let mut added = false;
        for i in 0..n {
            for j in 0..m {
                if !alignment.contains(i, j) {
                    continue;
                }
                for (di, dj) in NEIGHBORS {
                    let (Some(ni), Some(nj)) = (i.checked_add_signed(di), j.checked_add_signed(dj)) else {
                        continue;
                    };
                    if ni >= n || nj >= m || alignment.contains(ni, nj) {
                        continue;
                    }
                    if cov.either_free(ni, nj) && union.contains(ni, nj) {
                        alignment.insert(ni, nj).expect("in range");
                        cov.mark(ni, nj);
                        added = true;
                    }
                }
            }
        }
        if !added {
            return alignment;
        }
    }
}

fn final_stage(mut alignment: AlignmentLinkSet, union: &AlignmentLinkSet) -> AlignmentLinkSet {
    let mut cov = Coverage::of(&alignment);
    for (i, j) in union.iter().collect::<Vec<_>>() {
        if !alignment.contains(i, j) && cov.either_free(i, j) {
            alignment.insert(i, j).expect("in range");
            cov.mark(i, j);
        }
    }
    alignment
}
