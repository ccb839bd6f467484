use std::collections::HashMap;
use std::fmt::Write as _;

use log::warn;

use super::methods::distinct_words;
use super::IntegrateError;
use crate::decode::{transliterate, BeamConfig, NGramLM};
use crate::mine::TransliterationModel;
use crate::scalar::{log_sum_exp, parse_real, Real};

/// One transliteration option: `p(target | source)` and `p(source | target)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhraseTableEntry<F> {
    pub source: String,
    pub target: String,
    pub forward: F,
    pub backward: F,
}

/// Decodes each distinct word and turns its top-`n` list into entries.
/// Forward probabilities are a softmax of the combined scores over the
/// word's list; backward probabilities renormalize the forward ones over all
/// sources sharing a target. Words the decoder cannot handle are skipped and
/// returned separately.
pub fn export_phrase_table<'a, F, I>(
    model: &TransliterationModel<F>,
    lm: &NGramLM<char, F>,
    words: I,
    n: usize,
    beam: &BeamConfig,
) -> Result<(Vec<PhraseTableEntry<F>>, Vec<String>), IntegrateError>
where
    F: Real,
    I: IntoIterator<Item = &'a str>,
{
    if n == 0 {
        return Err(IntegrateError::ZeroNBest);
    }
    let cfg = BeamConfig {
        nbest: n,
        ..beam.clone()
    };
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for word in distinct_words(words) {
        let list = match transliterate(model, lm, &word, &cfg) {
            Ok(list) if !list.is_empty() => list,
            Ok(_) => {
                warn!("no transliteration for {word:?}; omitted from phrase table");
                skipped.push(word);
                continue;
            }
            Err(e) => {
                warn!("decoding {word:?} failed: {e}; omitted from phrase table");
                skipped.push(word);
                continue;
            }
        };
        let z = log_sum_exp(list.items().iter().map(|c| c.combined));
        for c in list.items() {
            entries.push(PhraseTableEntry {
                source: word.clone(),
                target: c.text.clone(),
                forward: positive((c.combined - z).exp()),
                backward: F::zero(),
            });
        }
    }
    let mut by_target: HashMap<&str, F> = HashMap::new();
    for e in &entries {
        *by_target.entry(e.target.as_str()).or_insert_with(F::zero) += e.forward;
    }
    let totals: Vec<F> = entries.iter().map(|e| by_target[e.target.as_str()]).collect();
    for (e, t) in entries.iter_mut().zip(totals) {
        e.backward = positive(e.forward / t);
    }
    Ok((entries, skipped))
}

fn positive<F: Real>(p: F) -> F {
    p.max(F::min_positive_value()).min(F::one())
}

/// `src ||| tgt ||| p_fwd p_bwd ||| ||| ` per line.
pub fn write_phrase_table<F: Real>(entries: &[PhraseTableEntry<F>]) -> String {
    let mut out = String::new();
    for e in entries {
        let _ = writeln!(
            out,
            "{} ||| {} ||| {} {} ||| ||| ",
            e.source, e.target, e.forward, e.backward
        );
    }
    out
}

pub fn parse_phrase_table<F: Real>(text: &str) -> Result<Vec<PhraseTableEntry<F>>, IntegrateError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fail = |m: &str| IntegrateError::Format {
            line: n + 1,
            message: m.to_string(),
        };
        let fields: Vec<&str> = line.split("|||").map(str::trim).collect();
        if fields.len() < 3 {
            return Err(fail("expected at least three ||| fields"));
        }
        let (source, target) = (fields[0], fields[1]);
        if source.is_empty() || target.is_empty() {
            return Err(fail("empty phrase"));
        }
        let scores: Vec<F> = fields[2]
            .split_whitespace()
            .map(|s| parse_real::<F>(s).ok_or_else(|| fail("bad score")))
            .collect::<Result<_, _>>()?;
        let [forward, backward] = scores[..] else {
            return Err(fail("expected two scores"));
        };
        let in_range = |p: F| p > F::zero() && p <= F::one();
        if !in_range(forward) || !in_range(backward) {
            return Err(fail("score outside (0, 1]"));
        }
        out.push(PhraseTableEntry {
            source: source.to_string(),
            target: target.to_string(),
            forward,
            backward,
        });
    }
    Ok(out)
}
