//! Unsupervised transliteration mining from word-aligned parallel text,
//! character-level transliteration decoding, OOV integration into MT output,
//! and MT evaluation metrics.

pub mod scalar;
pub mod textnorm;
pub mod align;
pub mod mine;
pub mod decode;
pub mod integrate;
pub mod eval;

/// Double-precision instantiations of the generic types.
pub type Model1Table = align::Model1Table<f64>;
pub type Unigram = mine::Unigram<f64>;
pub type TransliterationModel = mine::TransliterationModel<f64>;
pub type CharNGramLM = decode::NGramLM<char, f64>;
pub type WordNGramLM = decode::NGramLM<String, f64>;
pub type Candidate = decode::Candidate<f64>;
pub type NBestList = decode::NBestList<f64>;
pub type PhraseTableEntry = integrate::PhraseTableEntry<f64>;
pub type MinedPairs = mine::MinedPairs<f64>;
