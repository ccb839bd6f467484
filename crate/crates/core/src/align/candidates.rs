use std::collections::BTreeMap;

use super::{AlignError, AlignmentLinkSet};
use crate::textnorm::{ParallelCorpus, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordPair {
    pub source: String,
    pub target: String,
    pub count: u64,
}

/// Aggregated candidate word pairs, sorted by `(source, target)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordPairList {
    entries: Vec<WordPair>,
}

impl WordPairList {
    /// Duplicate `(source, target)` entries are merged by summing counts;
    /// zero counts are dropped.
    pub fn from_pairs<I, S, T>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, T, u64)>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut agg: BTreeMap<(String, String), u64> = BTreeMap::new();
        for (s, t, c) in pairs {
            *agg.entry((s.into(), t.into())).or_default() += c;
        }
        WordPairList {
            entries: agg
                .into_iter()
                .filter(|&(_, c)| c > 0)
                .map(|((source, target), count)| WordPair { source, target, count })
                .collect(),
        }
    }

    pub fn entries(&self) -> &[WordPair] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, WordPair> {
        self.entries.iter()
    }

    /// `source<TAB>target<TAB>count` per line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for p in &self.entries {
            out.push_str(&format!("{}\t{}\t{}\n", p.source, p.target, p.count));
        }
        out
    }

    /// Reads the TSV written by [`WordPairList::to_tsv`]; a missing count
    /// column means 1. Blank lines are skipped.
    pub fn from_tsv(text: &str) -> Result<Self, AlignError> {
        let mut pairs = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let err = |message: &str| AlignError::Format {
                line: n + 1,
                message: message.to_string(),
            };
            let (s, t, c) = match fields.as_slice() {
                [s, t] => (*s, *t, 1),
                [s, t, c, ..] => (*s, *t, c.trim().parse::<u64>().map_err(|_| err("bad count"))?),
                _ => return Err(err("expected source<TAB>target[<TAB>count]")),
            };
            if s.is_empty() || t.is_empty() {
                return Err(err("empty word"));
            }
            if c == 0 {
                return Err(err("count must be at least 1"));
            }
            pairs.push((s.to_string(), t.to_string(), c));
        }
        Ok(Self::from_pairs(pairs))
    }
}

impl<'a> IntoIterator for &'a WordPairList {
    type Item = &'a WordPair;
    type IntoIter = std::slice::Iter<'a, WordPair>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// Word-level filter applied to both sides of a candidate link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CandidateFilter {
    /// Words shorter than this many characters are skipped.
    pub min_chars: usize,
}

impl Default for CandidateFilter {
    fn default() -> Self {
        CandidateFilter { min_chars: 2 }
    }
}

/// Collects word pairs joined by 1-to-1 links: both endpoints take part in
/// exactly one link of their sentence's alignment.
pub fn extract_candidates(
    corpus: &ParallelCorpus,
    alignments: &[AlignmentLinkSet],
    filter: CandidateFilter,
) -> Result<WordPairList, AlignError> {
    if corpus.len() != alignments.len() {
        return Err(AlignError::LengthMismatch {
            corpus: corpus.len(),
            alignments: alignments.len(),
        });
    }
    let mut found = Vec::new();
    for (index, ((src, tgt), links)) in corpus.pairs().iter().zip(alignments).enumerate() {
        if links.src_len() != src.len() || links.tgt_len() != tgt.len() {
            return Err(AlignError::ShapeMismatch {
                index,
                got_src: links.src_len(),
                got_tgt: links.tgt_len(),
                src_len: src.len(),
                tgt_len: tgt.len(),
            });
        }
        let mut src_deg = vec![0usize; src.len()];
        let mut tgt_deg = vec![0usize; tgt.len()];
        for (i, j) in links.iter() {
            src_deg[i] += 1;
            tgt_deg[j] += 1;
        }
        for (i, j) in links.iter() {
            if src_deg[i] != 1 || tgt_deg[j] != 1 {
                continue;
            }
            let (s, t) = (&src.tokens()[i], &tgt.tokens()[j]);
            if s.kind() != TokenKind::Word || t.kind() != TokenKind::Word {
                continue;
            }
            if s.surface().chars().count() < filter.min_chars
                || t.surface().chars().count() < filter.min_chars
            {
                continue;
            }
            found.push((s.surface().to_string(), t.surface().to_string(), 1));
        }
    }
    Ok(WordPairList::from_pairs(found))
}
