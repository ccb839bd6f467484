use std::collections::BTreeSet;
use std::fmt;

use super::AlignError;

/// Word-level links `(source index, target index)` for one sentence pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlignmentLinkSet {
    links: BTreeSet<(usize, usize)>,
    src_len: usize,
    tgt_len: usize,
}

impl AlignmentLinkSet {
    pub fn empty(src_len: usize, tgt_len: usize) -> Self {
        AlignmentLinkSet {
            links: BTreeSet::new(),
            src_len,
            tgt_len,
        }
    }

    pub fn from_links<I>(src_len: usize, tgt_len: usize, links: I) -> Result<Self, AlignError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = Self::empty(src_len, tgt_len);
        for (i, j) in links {
            set.insert(i, j)?;
        }
        Ok(set)
    }

    pub fn insert(&mut self, i: usize, j: usize) -> Result<bool, AlignError> {
        if i >= self.src_len || j >= self.tgt_len {
            return Err(AlignError::OutOfRange {
                i,
                j,
                src_len: self.src_len,
                tgt_len: self.tgt_len,
            });
        }
        Ok(self.links.insert((i, j)))
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.links.contains(&(i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.links.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn src_len(&self) -> usize {
        self.src_len
    }

    pub fn tgt_len(&self) -> usize {
        self.tgt_len
    }

    /// Swaps the roles of source and target.
    pub fn transposed(&self) -> Self {
        AlignmentLinkSet {
            links: self.links.iter().map(|&(i, j)| (j, i)).collect(),
            src_len: self.tgt_len,
            tgt_len: self.src_len,
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        AlignmentLinkSet {
            links: self.links.intersection(&other.links).copied().collect(),
            src_len: self.src_len,
            tgt_len: self.tgt_len,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        AlignmentLinkSet {
            links: self.links.union(&other.links).copied().collect(),
            src_len: self.src_len,
            tgt_len: self.tgt_len,
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.links.is_subset(&other.links)
    }
}

/// Sorted `i-j` tokens joined by single spaces.
impl fmt::Display for AlignmentLinkSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (i, j)) in self.links.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{i}-{j}")?;
        }
        Ok(())
    }
}

pub fn parse_pharaoh(line: &str, src_len: usize, tgt_len: usize) -> Result<AlignmentLinkSet, AlignError> {
    let mut set = AlignmentLinkSet::empty(src_len, tgt_len);
    for tok in line.split_whitespace() {
        let (i, j) = tok
            .split_once('-')
            .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
            .ok_or_else(|| AlignError::Malformed(tok.to_string()))?;
        set.insert(i, j)?;
    }
    Ok(set)
}
