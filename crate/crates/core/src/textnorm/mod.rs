//! Normalization, tokenization, cleaning and statistics for Urdu–English
//! parallel text.

mod corpus;
mod normalize;
mod tokenize;

pub use corpus::{
    clean_pair, corpus_stats, CleanBounds, CleanDecision, CleaningReport, CorpusStats,
    ParallelCorpus, SideStats,
};
pub use normalize::{normalize_bytes, normalize_text, NormalizationTable};
pub use tokenize::{classify, is_digit, tokenize, Sentence, Token, TokenKind};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TextError {
    #[error("invalid UTF-8 at byte offset {offset}")]
    Decode { offset: usize },
    #[error("normalization table maps {0:?} more than once")]
    DuplicateKey(String),
    #[error("normalization table replacement {replacement:?} for {key:?} is not a fixed point")]
    NotFixedPoint { key: String, replacement: String },
    #[error("normalization table contains an empty key")]
    EmptyKey,
    #[error("invalid cleaning bounds: min={min}, max={max}")]
    InvalidBounds { min: usize, max: usize },
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("parallel files differ in length: {src} source lines, {tgt} target lines")]
    LineCountMismatch { src: usize, tgt: usize },
}
