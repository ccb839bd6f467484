use std::collections::BTreeSet;

use crate::textnorm::{Sentence, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OovReason {
    /// Contains Arabic-block characters, i.e. passed through untranslated.
    SourceScript,
    NotInVocab,
    /// Wrapped by the MT decoder as `UNK|word|`.
    DecoderMarker,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OovOccurrence {
    pub sentence: usize,
    pub token: usize,
    /// The token exactly as it appears in the sentence.
    pub surface: String,
    /// What should be transliterated: the surface with any marker removed.
    pub word: String,
    pub reason: OovReason,
}

pub fn is_source_script(c: char) -> bool {
    ('\u{0600}'..='\u{06FF}').contains(&c)
}

/// `UNK|word|` → `word`.
pub fn unwrap_marker(surface: &str) -> Option<&str> {
    surface
        .strip_prefix("UNK|")
        .and_then(|s| s.strip_suffix('|'))
        .filter(|w| !w.is_empty())
}

/// Flags decoder markers and source-script tokens, and with a vocabulary
/// also word tokens missing from it (exact or lowercased). Punctuation and
/// numbers are never flagged.
pub fn detect_oov(
    sentence_index: usize,
    sentence: &Sentence,
    vocab: Option<&BTreeSet<String>>,
) -> Vec<OovOccurrence> {
    let mut out = Vec::new();
    for (i, tok) in sentence.tokens().iter().enumerate() {
        let surface = tok.surface();
        let hit = if let Some(w) = unwrap_marker(surface) {
            Some((w, OovReason::DecoderMarker))
        } else if tok.kind() != TokenKind::Word {
            None
        } else if surface.chars().any(is_source_script) {
            Some((surface, OovReason::SourceScript))
        } else {
            match vocab {
                Some(v) if !v.contains(surface) && !v.contains(&surface.to_lowercase()) => {
                    Some((surface, OovReason::NotInVocab))
                }
                _ => None,
            }
        };
        if let Some((word, reason)) = hit {
            out.push(OovOccurrence {
                sentence: sentence_index,
                token: i,
                surface: surface.to_string(),
                word: word.to_string(),
                reason,
            });
        }
    }
    out
}
