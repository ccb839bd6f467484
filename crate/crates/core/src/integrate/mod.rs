//! OOV detection in MT output and the three ways of feeding transliterations
//! back into it: direct 1-best replacement, word-LM rescoring of the n-best,
//! and phrase-table export for an external decoder.

mod methods;
mod oov;
mod phrase_table;

pub use methods::{
    integrate_corpus, method1_replace, method2_rescore, IntegrateConfig, Integrated, Method,
};
pub use oov::{detect_oov, is_source_script, unwrap_marker, OovOccurrence, OovReason};
pub use phrase_table::{
    export_phrase_table, parse_phrase_table, write_phrase_table, PhraseTableEntry,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IntegrateError {
    #[error("n-best size must be at least 1")]
    ZeroNBest,
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Decode(#[from] crate::decode::DecodeError),
}
