//! Word alignment: Pharaoh-format links, an IBM Model 1 fallback aligner,
//! symmetrization and extraction of 1-to-1 word pairs for mining.

mod candidates;
mod links;
mod model1;
mod symmetrize;

pub use candidates::{extract_candidates, CandidateFilter, WordPair, WordPairList};
pub use links::{parse_pharaoh, AlignmentLinkSet};
pub use model1::{log_likelihood, train_model1, viterbi_align, Model1Table, Model1Training};
pub use symmetrize::{symmetrize, Symmetrization};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AlignError {
    #[error("malformed alignment token {0:?}")]
    Malformed(String),
    #[error("link {i}-{j} out of range for sentence lengths ({src_len}, {tgt_len})")]
    OutOfRange {
        i: usize,
        j: usize,
        src_len: usize,
        tgt_len: usize,
    },
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("iterations must be at least 1")]
    ZeroIterations,
    #[error("{corpus} sentence pairs but {alignments} alignment lines")]
    LengthMismatch { corpus: usize, alignments: usize },
    #[error("alignment for pair {index} was built for lengths ({got_src}, {got_tgt}), sentence has ({src_len}, {tgt_len})")]
    ShapeMismatch {
        index: usize,
        got_src: usize,
        got_tgt: usize,
        src_len: usize,
        tgt_len: usize,
    },
    #[error("unknown symmetrization heuristic {0:?}")]
    UnknownHeuristic(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}
