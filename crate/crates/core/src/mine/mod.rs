//! Transliteration mining: character-multigram alignment lattices, the
//! transliteration / non-transliteration mixture trained by EM, and the
//! posterior-based classifier over candidate word pairs.

mod em;
mod lattice;
mod model;
mod multigram;

pub use em::{
    em_train, mine_pairs, EmConfig, EmTrace, IterationStats, MinedPair, MinedPairs, SkipReason,
    SkippedPair,
};
pub use lattice::{
    enumerate_alignments, joint_prob, log_joint_prob, AlignmentLattice, MAX_ENUMERATION_CHARS,
};
pub use model::{
    log_nontranslit_prob, nontranslit_prob, posterior_translit, TransliterationModel, Unigram,
    UNSEEN_CHAR_PROB,
};
pub use multigram::{Multigram, Segment, Shape};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MineError {
    #[error("candidate list is empty")]
    NoCandidates,
    #[error("no candidate pair is usable for training")]
    NoUsablePairs,
    #[error("max_iterations must be at least 1")]
    ZeroIterations,
    #[error("invalid shape ({0}, {1}); allowed shapes are (1,0) (0,1) (1,1) (1,2) (2,1)")]
    InvalidShape(u8, u8),
    #[error("shape set is empty")]
    NoShapes,
    #[error("words longer than {limit} characters cannot be enumerated")]
    TooLong { limit: usize },
    #[error("{what} sums to {sum}, expected 1")]
    NotNormalized { what: String, sum: f64 },
    #[error("lambda {0} outside [0, 1]")]
    LambdaOutOfRange(f64),
    #[error("threshold {0} outside [0, 1]")]
    ThresholdOutOfRange(f64),
    #[error("log-likelihood became non-finite at iteration {0}")]
    Diverged(usize),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}
