use std::collections::BTreeSet;
use std::path::Path;

use log::{info, warn};
use rayon::prelude::*;
use translit_core::decode::{transliterate as decode_word, BeamConfig};
use translit_core::integrate::{
    detect_oov, export_phrase_table, integrate_corpus, write_phrase_table, IntegrateConfig, Method,
};
use translit_core::mine::MinedPairs;
use translit_core::textnorm::Sentence;
use translit_core::{CharNGramLM, TransliterationModel, WordNGramLM};

use crate::error::{CliError, Result};
use crate::files::{emit, join_lines, read_lines, read_text, write_atomic};
use crate::settings::Settings;
use crate::{BeamArgs, ExportPtArgs, IntegrateArgs, TrainLmArgs, TransliterateArgs};

fn load_model(path: &Path) -> Result<TransliterationModel> {
    TransliterationModel::from_tsv(&read_text(path)?).map_err(|e| CliError::from(e).in_file(path))
}

fn load_char_lm(path: &Path) -> Result<CharNGramLM> {
    CharNGramLM::from_text(&read_text(path)?).map_err(|e| CliError::from(e).in_file(path))
}

fn load_word_lm(path: &Path) -> Result<WordNGramLM> {
    WordNGramLM::from_text(&read_text(path)?).map_err(|e| CliError::from(e).in_file(path))
}

fn load_vocab(path: Option<&Path>) -> Result<Option<BTreeSet<String>>> {
    let Some(path) = path else { return Ok(None) };
    Ok(Some(
        read_lines(path)?
            .iter()
            .map(|l| l.trim())
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect(),
    ))
}

fn beam_config(s: &Settings, a: &BeamArgs) -> Result<BeamConfig> {
    let d = BeamConfig::default();
    let cfg = BeamConfig {
        beam_width: s.get(a.beam_width, "beam_width", d.beam_width)?,
        nbest: s.get(a.nbest, "nbest", d.nbest)?,
        tm_weight: s.get(a.tm_weight, "tm_weight", d.tm_weight)?,
        lm_weight: s.get(a.lm_weight, "lm_weight", d.lm_weight)?,
        max_length_ratio: s.get(a.max_length_ratio, "max_length_ratio", d.max_length_ratio)?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn read_sentences(path: &Path) -> Result<Vec<Sentence>> {
    Ok(read_lines(path)?.iter().map(|l| Sentence::from_pretokenized(l)).collect())
}

pub fn train_lm(s: &Settings, a: TrainLmArgs) -> Result<()> {
    let level = s.get(a.level, "level", "char".to_string())?;
    let word_level = match level.as_str() {
        "char" => false,
        "word" => true,
        other => return Err(CliError::usage(format!("unknown LM level {other:?} (char or word)"))),
    };
    let mined = if word_level { None } else { s.opt_input(a.mined, "mined")? };
    let corpus = match s.opt_path(a.corpus, "corpus").or_else(|| s.opt_path(None, "tgt")) {
        Some(p) => {
            crate::settings::check_exists(&p)?;
            Some(p)
        }
        None if mined.is_some() => None,
        None => return Err(CliError::usage("missing required path corpus")),
    };
    let output = match s.opt_path(a.output, "output") {
        Some(p) => p,
        None => s.output(None, if word_level { "word_lm" } else { "lm" })?,
    };
    let order = s.get(a.order, "order", 3)?;
    let discount = s.get(a.discount, "discount", 0.75)?;
    let text = if word_level {
        let sentences = read_sentences(corpus.as_deref().expect("checked above"))?;
        let seqs: Vec<Vec<String>> = sentences.iter().filter(|s| !s.is_empty()).map(Sentence::to_strings).collect();
        let lm = WordNGramLM::train(seqs, order, discount)?;
        info!("stage=train-lm level=word vocab={}", lm.vocab().len());
        lm.to_text()
    } else {
        // trained on word types, so frequent words do not dominate
        let words: Vec<String> = match (&mined, &corpus) {
            (Some(p), _) => MinedPairs::<f64>::from_tsv(&read_text(p)?)
                .map_err(|e| CliError::from(e).in_file(p))?
                .target_words(),
            (None, Some(p)) => {
                let types: BTreeSet<String> = read_sentences(p)?
                    .iter()
                    .flat_map(|s| s.tokens().iter().filter(|t| t.is_word()).map(|t| t.surface().to_string()))
                    .collect();
                types.into_iter().collect()
            }
            (None, None) => unreachable!("checked above"),
        };
        let lm = CharNGramLM::train_words(&words, order, discount)?;
        info!("stage=train-lm level=char words={} vocab={}", words.len(), lm.vocab().len());
        lm.to_text()
    };
    write_atomic(&output, &text)
}

pub fn transliterate(s: &Settings, a: TransliterateArgs) -> Result<()> {
    let model = load_model(&s.input(a.model, "model")?)?;
    let lm = load_char_lm(&s.input(a.lm, "lm")?)?;
    let words_path = s.input(a.words, "words")?;
    let output = s.opt_path(a.output, "output");
    let cfg = beam_config(s, &a.beam)?;
    let words: Vec<String> = read_lines(&words_path)?
        .iter()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty())
        .collect();
    let lists = words
        .par_iter()
        .map(|w| decode_word(&model, &lm, w, &cfg))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut out = String::new();
    let mut failed = 0;
    for (w, list) in words.iter().zip(&lists) {
        if list.oov_failure() {
            warn!("stage=transliterate no candidates for {w:?}");
            failed += 1;
        }
        out.push_str(&list.to_tsv(w));
    }
    emit(output.as_deref(), &out)?;
    info!("stage=transliterate words={} failed={failed}", words.len());
    Ok(())
}

fn export(
    model: &TransliterationModel,
    lm: &CharNGramLM,
    words: &[String],
    cfg: &BeamConfig,
    output: Option<&Path>,
) -> Result<()> {
    let (entries, skipped) =
        export_phrase_table(model, lm, words.iter().map(String::as_str), cfg.nbest, cfg)?;
    emit(output, &write_phrase_table(&entries))?;
    info!(
        "stage=export-pt words={} entries={} skipped={}",
        words.len(),
        entries.len(),
        skipped.len()
    );
    Ok(())
}

fn oov_words(sentences: &[Sentence], vocab: Option<&BTreeSet<String>>) -> Vec<String> {
    sentences
        .iter()
        .enumerate()
        .flat_map(|(i, s)| detect_oov(i, s, vocab))
        .map(|o| o.word)
        .collect()
}

pub fn integrate(s: &Settings, a: IntegrateArgs) -> Result<()> {
    let model = load_model(&s.input(a.model, "model")?)?;
    let lm = load_char_lm(&s.input(a.lm, "lm")?)?;
    let input = s.input(a.input, "input")?;
    let output = s.opt_path(a.output, "output");
    let method = s.get(a.method, "method", "1".to_string())?;
    let vocab = load_vocab(s.opt_input(a.vocab, "vocab")?.as_deref())?;
    let beam = beam_config(s, &a.beam)?;
    let sentences = read_sentences(&input)?;
    let method = match method.as_str() {
        "1" => Method::Replace,
        "2" => Method::Rescore,
        "3" | "3-export" => {
            return export(&model, &lm, &oov_words(&sentences, vocab.as_ref()), &beam, output.as_deref());
        }
        other => return Err(CliError::usage(format!("unknown method {other:?} (1, 2 or 3)"))),
    };
    let word_lm = match method {
        Method::Rescore => Some(load_word_lm(&s.input(a.word_lm, "word_lm")?)?),
        Method::Replace => None,
    };
    let cfg = IntegrateConfig {
        beam,
        vocab,
        word_lm_weight: s.get(a.word_lm_weight, "word_lm_weight", 1.0)?,
    };
    let results = integrate_corpus(&sentences, method, &model, &lm, word_lm.as_ref(), &cfg);
    emit(output.as_deref(), &join_lines(results.iter().map(|r| r.sentence.to_string())))?;
    let sum = |f: fn(&translit_core::integrate::Integrated) -> usize| results.iter().map(f).sum::<usize>();
    info!(
        "stage=integrate sentences={} oov={} replaced={} failed={} lm_oov={}",
        results.len(),
        sum(|r| r.oovs.len()),
        sum(|r| r.replaced),
        sum(|r| r.failed.len()),
        sum(|r| r.lm_oov)
    );
    Ok(())
}

pub fn export_pt(s: &Settings, a: ExportPtArgs) -> Result<()> {
    let model = load_model(&s.input(a.model, "model")?)?;
    let lm = load_char_lm(&s.input(a.lm, "lm")?)?;
    let output = s.opt_path(a.phrase_table, "phrase_table");
    let beam = beam_config(s, &a.beam)?;
    let words = match s.opt_input(a.words, "words")? {
        Some(p) => read_lines(&p)?
            .iter()
            .map(|l| l.trim().to_string())
            .filter(|l| !l.is_empty())
            .collect(),
        None => {
            let input = s.input(a.input, "input")?;
            let vocab = load_vocab(s.opt_input(a.vocab, "vocab")?.as_deref())?;
            oov_words(&read_sentences(&input)?, vocab.as_ref())
        }
    };
    export(&model, &lm, &words, &beam, output.as_deref())
}
