use std::collections::{BTreeSet, HashSet};

use log::warn;
use rayon::prelude::*;

use super::oov::{detect_oov, OovOccurrence};
use crate::decode::{transliterate, BeamConfig, Candidate, NBestList, NGramLM};
use crate::mine::TransliterationModel;
use crate::scalar::Real;
use crate::textnorm::Sentence;

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrateConfig {
    pub beam: BeamConfig,
    /// Target vocabulary; when present, words outside it are also OOV.
    pub vocab: Option<BTreeSet<String>>,
    /// Weight of the word-LM window score in rescoring.
    pub word_lm_weight: f64,
}

impl Default for IntegrateConfig {
    fn default() -> Self {
        IntegrateConfig {
            beam: BeamConfig::default(),
            vocab: None,
            word_lm_weight: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Replace,
    Rescore,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integrated {
    pub sentence: Sentence,
    pub oovs: Vec<OovOccurrence>,
    pub replaced: usize,
    /// OOV words the decoder produced nothing for; left as they were.
    pub failed: Vec<String>,
    /// Chosen candidates unknown to the word LM (rescoring only).
    pub lm_oov: usize,
}

fn nbest_for<F: Real>(
    model: &TransliterationModel<F>,
    lm: &NGramLM<char, F>,
    word: &str,
    cfg: &BeamConfig,
) -> NBestList<F> {
    match transliterate(model, lm, word, cfg) {
        Ok(list) => list,
        Err(e) => {
            warn!("decoding {word:?} failed: {e}");
            NBestList::new(cfg.nbest)
        }
    }
}

fn integrate_with<C>(
    index: usize,
    sentence: &Sentence,
    cfg: &IntegrateConfig,
    mut choose: C,
) -> Integrated
where
    C: FnMut(&Sentence, &OovOccurrence) -> Option<String>,
{
    let oovs = detect_oov(index, sentence, cfg.vocab.as_ref());
    let mut out = sentence.clone();
    let mut replaced = 0;
    let mut failed = Vec::new();
    for occ in &oovs {
        match choose(&out, occ) {
            Some(text) if out.replace(occ.token, &text) => replaced += 1,
            _ => {
                warn!("sentence {index}: no transliteration for {:?}, kept as is", occ.word);
                failed.push(occ.word.clone());
            }
        }
    }
    Integrated {
        sentence: out,
        oovs,
        replaced,
        failed,
        lm_oov: 0,
    }
}

/// Replaces each OOV token with the decoder's 1-best, ignoring context.
pub fn method1_replace<F: Real>(
    index: usize,
    sentence: &Sentence,
    model: &TransliterationModel<F>,
    lm: &NGramLM<char, F>,
    cfg: &IntegrateConfig,
) -> Integrated {
    integrate_with(index, sentence, cfg, |_, occ| {
        nbest_for(model, lm, &occ.word, &cfg.beam)
            .best()
            .map(|c| c.text.clone())
    })
}

/// Picks, for each OOV, the n-best candidate maximizing the decoder score
/// plus the weighted word-LM score of `previous candidate next`. The
/// previous word is taken after any earlier replacement in the sentence.
pub fn method2_rescore<F: Real>(
    index: usize,
    sentence: &Sentence,
    model: &TransliterationModel<F>,
    lm_char: &NGramLM<char, F>,
    lm_word: &NGramLM<String, F>,
    cfg: &IntegrateConfig,
) -> Integrated {
    let w = F::of(cfg.word_lm_weight);
    let mut lm_oov = 0;
    let mut result = integrate_with(index, sentence, cfg, |current, occ| {
        let list = nbest_for(model, lm_char, &occ.word, &cfg.beam);
        let prev: Vec<String> = occ
            .token
            .checked_sub(1)
            .and_then(|i| current.get(i))
            .map(|t| t.surface().to_string())
            .into_iter()
            .collect();
        let next = current.get(occ.token + 1).map(|t| t.surface().to_string());
        let chosen = choose_candidate(list.items(), |cand| {
            let mut seq = vec![cand.to_string()];
            seq.extend(next.iter().cloned());
            w * lm_word.window_logprob(&prev, &seq, next.is_none())
        })?;
        if !lm_word.contains(&chosen.text) {
            lm_oov += 1;
        }
        Some(chosen.text.clone())
    });
    result.lm_oov = lm_oov;
    result
}

/// Highest `combined + extra(text)`; ties go to the earlier candidate, so a
/// constant `extra` reproduces the list's own ranking.
fn choose_candidate<F: Real, X: FnMut(&str) -> F>(
    items: &[Candidate<F>],
    mut extra: X,
) -> Option<&Candidate<F>> {
    let mut best: Option<(F, &Candidate<F>)> = None;
    for c in items {
        let s = c.combined + extra(&c.text);
        if best.is_none_or(|(b, _)| s > b) {
            best = Some((s, c));
        }
    }
    best.map(|(_, c)| c)
}

/// Applies a method to every sentence, in parallel, keeping input order.
pub fn integrate_corpus<F: Real>(
    sentences: &[Sentence],
    method: Method,
    model: &TransliterationModel<F>,
    lm_char: &NGramLM<char, F>,
    lm_word: Option<&NGramLM<String, F>>,
    cfg: &IntegrateConfig,
) -> Vec<Integrated> {
    sentences
        .par_iter()
        .enumerate()
        .map(|(i, s)| match (method, lm_word) {
            (Method::Rescore, Some(wlm)) => method2_rescore(i, s, model, lm_char, wlm, cfg),
            _ => method1_replace(i, s, model, lm_char, cfg),
        })
        .collect()
}

/// Distinct OOV words in first-appearance order.
pub(crate) fn distinct_words<'a, I: IntoIterator<Item = &'a str>>(words: I) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for w in words {
        if seen.insert(w) {
            out.push(w.to_string());
        }
    }
    out
}
