//! Character n-gram language model and monotonic beam-search
//! transliteration of single words.

mod beam;
mod lm;
mod oracle;

pub use beam::{transliterate, BeamConfig, Candidate, NBestList};
pub use lm::{LmState, LmToken, NGramLM, Symbol};
pub use oracle::{exhaustive_oracle, MAX_ORACLE_ALPHABET, MAX_ORACLE_LEN};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DecodeError {
    #[error("language model training data is empty")]
    EmptyTrainingData,
    #[error("n-gram order must be at least 1")]
    InvalidOrder,
    #[error("discount {0} outside [0, 1]")]
    InvalidDiscount(f64),
    #[error("symbol {0:?} is reserved or contains whitespace")]
    InvalidSymbol(String),
    #[error("invalid beam configuration: {0}")]
    InvalidConfig(String),
    #[error("source word is empty")]
    EmptySource,
    #[error("oracle limited to target alphabets of {max_alphabet} and length {max_len}")]
    OracleBounds { max_alphabet: usize, max_len: usize },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}
