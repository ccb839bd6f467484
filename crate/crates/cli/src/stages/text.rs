use std::path::Path;

use log::info;
use translit_core::textnorm::{
    corpus_stats, normalize_text, tokenize, CleanBounds, NormalizationTable, ParallelCorpus,
};

use super::read_parallel;
use crate::error::{CliError, Result};
use crate::files::{emit, join_lines, read_lines, read_text, write_atomic};
use crate::settings::Settings;
use crate::{CleanArgs, NormalizeArgs, StatsArgs};

/// `from<TAB>to` lines, or the built-in table when no file is given.
fn load_table(path: Option<&Path>) -> Result<NormalizationTable> {
    let Some(path) = path else {
        return Ok(NormalizationTable::urdu_default());
    };
    let text = read_text(path)?;
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('\t')
            .ok_or_else(|| CliError::data(format!("{}: line {}: expected from<TAB>to", path.display(), n + 1)))?;
        pairs.push((k.to_string(), v.to_string()));
    }
    NormalizationTable::new(pairs).map_err(|e| CliError::from(e).in_file(path))
}

pub fn normalize(s: &Settings, a: NormalizeArgs) -> Result<()> {
    let input = s.input(a.input, "input")?;
    let output = s.opt_path(a.output, "output");
    let table = load_table(s.opt_input(a.table, "table")?.as_deref())?;
    let tok = s.get(a.tokenize, "tokenize", true)?;
    let lines = read_lines(&input)?;
    let out: Vec<String> = lines
        .iter()
        .map(|l| {
            let n = normalize_text(l, &table);
            if tok {
                tokenize(&n).to_string()
            } else {
                n
            }
        })
        .collect();
    emit(output.as_deref(), &join_lines(&out))?;
    info!("stage=normalize lines={}", out.len());
    Ok(())
}

pub fn clean(s: &Settings, a: CleanArgs) -> Result<()> {
    let src = s.input(a.src, "src")?;
    let tgt = s.input(a.tgt, "tgt")?;
    let out_src = s.output(a.out_src, "out_src")?;
    let out_tgt = s.output(a.out_tgt, "out_tgt")?;
    let table = load_table(s.opt_input(a.table, "table")?.as_deref())?;
    let bounds = CleanBounds::new(s.get(a.min_len, "min_len", 1)?, s.get(a.max_len, "max_len", 80)?)?;
    let (corpus, report) = ParallelCorpus::from_lines(&read_lines(&src)?, &read_lines(&tgt)?, &table, bounds)?;
    write_atomic(&out_src, &join_lines(corpus.pairs().iter().map(|p| p.0.to_string())))?;
    write_atomic(&out_tgt, &join_lines(corpus.pairs().iter().map(|p| p.1.to_string())))?;
    info!(
        "stage=clean read={} kept={} dropped={}",
        report.read, report.kept, report.dropped
    );
    Ok(())
}

pub fn stats(s: &Settings, a: StatsArgs) -> Result<()> {
    let src = s.input(a.src, "src")?;
    let tgt = s.input(a.tgt, "tgt")?;
    let output = s.opt_path(a.output, "output");
    let fold = s.get(a.fold_case, "fold_case", false)?;
    let corpus = read_parallel(&src, &tgt)?;
    let table = corpus_stats(&corpus, fold)?.render_table();
    emit(output.as_deref(), &table)?;
    info!("stage=stats sentences={}", corpus.len());
    Ok(())
}
