//! MT evaluation: clipped n-gram precision, BLEU, METEOR, TER and
//! bag-of-words precision/recall/F1, plus corpus reports.

mod metrics;
mod report;
mod ter;

pub use metrics::{
    bleu, clipped_ngram_precision, meteor, meteor_stats, prf, BleuScore, MeteorPenalty,
    MeteorStats,
};
pub use report::{evaluate_corpus, render_tables, EvalConfig, EvalReport, Scores};
pub use ter::{edit_distance, ter, ter_edits};

use thiserror::Error;

use crate::textnorm::{classify, TokenKind};

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("no reference translations supplied")]
    NoReferences,
    #[error("reference is empty")]
    EmptyReference,
    #[error("{hyps} hypotheses but {refs} reference sets")]
    LengthMismatch { hyps: usize, refs: usize },
    #[error("n-gram order must be at least 1")]
    InvalidOrder,
}

/// Token preprocessing shared by all metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchOptions {
    pub lowercase: bool,
    /// Drop tokens made only of punctuation before matching.
    pub strip_punct: bool,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            lowercase: true,
            strip_punct: true,
        }
    }
}

impl MatchOptions {
    pub fn prepare<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<String> {
        tokens
            .iter()
            .map(AsRef::as_ref)
            .filter(|t| !self.strip_punct || classify(t) != TokenKind::Punctuation)
            .map(|t| if self.lowercase { t.to_lowercase() } else { t.to_string() })
            .collect()
    }
}
