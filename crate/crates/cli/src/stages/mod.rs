pub mod decoding;
pub mod evaluation;
pub mod mining;
pub mod text;

use std::path::Path;

use translit_core::textnorm::{ParallelCorpus, Sentence};

use crate::error::{CliError, Result};
use crate::files::read_lines;

/// Two line-aligned, already tokenized files. Empty lines are rejected so
/// that line numbers stay aligned with downstream files.
pub fn read_parallel(src: &Path, tgt: &Path) -> Result<ParallelCorpus> {
    let s = read_lines(src)?;
    let t = read_lines(tgt)?;
    if s.len() != t.len() {
        return Err(CliError::data(format!(
            "{} has {} lines but {} has {}",
            src.display(),
            s.len(),
            tgt.display(),
            t.len()
        )));
    }
    let mut pairs = Vec::with_capacity(s.len());
    for (n, (a, b)) in s.iter().zip(&t).enumerate() {
        let (a, b) = (Sentence::from_pretokenized(a), Sentence::from_pretokenized(b));
        if a.is_empty() || b.is_empty() {
            return Err(CliError::data(format!("line {}: empty sentence (run clean first)", n + 1)));
        }
        pairs.push((a, b));
    }
    Ok(ParallelCorpus::new(pairs, "ur", "en"))
}
