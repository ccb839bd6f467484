use std::path::Path;

use log::info;
use translit_core::eval::{evaluate_corpus, render_tables, EvalConfig, MatchOptions, MeteorPenalty};
use translit_core::textnorm::tokenize;

use crate::error::{CliError, Result};
use crate::files::{emit, read_lines, write_atomic};
use crate::settings::Settings;
use crate::EvaluateArgs;

fn read_tokenized(path: &Path) -> Result<Vec<Vec<String>>> {
    Ok(read_lines(path)?.iter().map(|l| tokenize(l).to_strings()).collect())
}

pub fn evaluate(s: &Settings, a: EvaluateArgs) -> Result<()> {
    let hyps = s.path_list(a.hyp, "hyp");
    let refs = s.path_list(a.refs, "ref");
    if hyps.is_empty() {
        return Err(CliError::usage("missing required path hyp"));
    }
    if refs.is_empty() {
        return Err(CliError::usage("missing required path ref"));
    }
    for p in hyps.iter().chain(&refs) {
        crate::settings::check_exists(p)?;
    }
    let mut labels = s.list(a.label, "label");
    if labels.len() > hyps.len() {
        return Err(CliError::usage("more labels than hypothesis files"));
    }
    for (i, h) in hyps.iter().enumerate().skip(labels.len()) {
        labels.push(h.file_stem().map_or_else(|| format!("system{}", i + 1), |f| f.to_string_lossy().into_owned()));
    }
    let penalty = match s.get(a.meteor_penalty, "meteor_penalty", "linear".to_string())?.as_str() {
        "linear" => MeteorPenalty::Linear,
        "cubed" => MeteorPenalty::Cubed,
        other => return Err(CliError::usage(format!("unknown METEOR penalty {other:?}"))),
    };
    let cfg = EvalConfig {
        matching: MatchOptions {
            lowercase: s.get(a.lowercase, "lowercase", true)?,
            strip_punct: s.get(a.strip_punct, "strip_punct", true)?,
        },
        max_n: s.get(a.max_n, "max_n", 4)?,
        meteor_penalty: penalty,
        ter_shifts: s.get(a.ter_shifts, "ter_shifts", false)?,
    };
    let ref_sides: Vec<Vec<Vec<String>>> = refs.iter().map(|p| read_tokenized(p)).collect::<Result<_>>()?;
    let n = ref_sides[0].len();
    if let Some((p, r)) = refs.iter().zip(&ref_sides).find(|(_, r)| r.len() != n) {
        return Err(CliError::data(format!("{} has {} lines, expected {n}", p.display(), r.len())));
    }
    let per_sentence: Vec<Vec<Vec<String>>> = (0..n).map(|i| ref_sides.iter().map(|r| r[i].clone()).collect()).collect();
    let mut reports = Vec::new();
    for (path, label) in hyps.iter().zip(&labels) {
        let h = read_tokenized(path)?;
        if h.len() != n {
            return Err(CliError::data(format!("{} has {} lines, expected {n}", path.display(), h.len())));
        }
        let rep = evaluate_corpus(label, &h, &per_sentence, &cfg).map_err(|e| CliError::from(e).in_file(path))?;
        info!(
            "stage=evaluate system={label:?} bleu={:.4} meteor={:.4} ter={:.4}",
            rep.corpus.bleu, rep.corpus.meteor, rep.corpus.ter
        );
        reports.push(rep);
    }
    let (plain, tsv) = render_tables(&reports);
    emit(s.opt_path(a.output, "output").as_deref(), &plain)?;
    if let Some(p) = s.opt_path(a.tsv, "tsv") {
        write_atomic(&p, &tsv)?;
    }
    if let Some(p) = s.opt_path(a.sentences, "sentences") {
        write_atomic(&p, &reports[0].sentences_tsv())?;
    }
    Ok(())
}
