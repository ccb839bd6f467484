use std::fmt::Write as _;

use rayon::prelude::*;

use super::metrics::{bleu, clipped_ngram_precision, meteor_stats, overlap, prf_from_counts};
use super::ter::ter_parts;
use super::{EvalError, MatchOptions, MeteorPenalty, MeteorStats};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scores {
    pub bleu: f64,
    pub meteor: f64,
    pub ter: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Clipped unigram precision against all references.
    pub unigram_precision: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub matching: MatchOptions,
    pub max_n: usize,
    pub meteor_penalty: MeteorPenalty,
    pub ter_shifts: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            matching: MatchOptions::default(),
            max_n: 4,
            meteor_penalty: MeteorPenalty::Linear,
            ter_shifts: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub label: String,
    pub corpus: Scores,
    pub sentences: Vec<Scores>,
}

struct SentenceParts {
    scores: Scores,
    meteor: MeteorStats,
    edits: usize,
    avg_ref: f64,
    overlap: (usize, usize, usize),
}

fn sentence_parts<H: AsRef<str> + Clone, R: AsRef<str> + Clone>(
    hyp: &[H],
    refs: &[Vec<R>],
    cfg: &EvalConfig,
) -> Result<SentenceParts, EvalError> {
    let o = &cfg.matching;
    if refs.is_empty() {
        return Err(EvalError::NoReferences);
    }
    let meteor = refs
        .iter()
        .map(|r| meteor_stats(hyp, r, o))
        .fold(None, |best: Option<MeteorStats>, s| match best {
            Some(b) if b.score(cfg.meteor_penalty) >= s.score(cfg.meteor_penalty) => Some(b),
            _ => Some(s),
        })
        .unwrap_or_default();
    let ov = refs
        .iter()
        .map(|r| overlap(hyp, r, o))
        .fold(None, |best: Option<(usize, usize, usize)>, s| match best {
            Some(b) if b.0 >= s.0 => Some(b),
            _ => Some(s),
        })
        .unwrap_or_default();
    let (edits, avg_ref) = ter_parts(hyp, refs, o, cfg.ter_shifts)?;
    let (precision, recall, f1) = prf_from_counts(ov.0, ov.1, ov.2);
    let scores = Scores {
        bleu: bleu(std::slice::from_ref(&hyp.to_vec()), std::slice::from_ref(&refs.to_vec()), cfg.max_n, o)?.score,
        meteor: meteor.score(cfg.meteor_penalty),
        ter: edits as f64 / avg_ref,
        precision,
        recall,
        f1,
        unigram_precision: clipped_ngram_precision(hyp, refs, 1, o)?,
    };
    Ok(SentenceParts {
        scores,
        meteor,
        edits,
        avg_ref,
        overlap: ov,
    })
}

/// Sentence scores and corpus aggregates: BLEU from pooled n-gram counts,
/// METEOR and P/R/F1 from pooled match counts (best reference per
/// sentence), TER as total edits over total average reference length.
pub fn evaluate_corpus<H, R>(
    label: &str,
    hyps: &[Vec<H>],
    refs: &[Vec<Vec<R>>],
    cfg: &EvalConfig,
) -> Result<EvalReport, EvalError>
where
    H: AsRef<str> + Sync + Clone,
    R: AsRef<str> + Sync + Clone,
{
    if hyps.len() != refs.len() {
        return Err(EvalError::LengthMismatch {
            hyps: hyps.len(),
            refs: refs.len(),
        });
    }
    let parts: Vec<SentenceParts> = hyps
        .par_iter()
        .zip(refs.par_iter())
        .map(|(h, r)| sentence_parts(h, r, cfg))
        .collect::<Result<_, _>>()?;
    let corpus_bleu = bleu(hyps, refs, cfg.max_n, &cfg.matching)?;
    let mut meteor = MeteorStats::default();
    let (mut edits, mut ref_len) = (0usize, 0.0f64);
    let (mut m, mut h, mut r) = (0usize, 0usize, 0usize);
    for p in &parts {
        meteor = meteor + p.meteor;
        edits += p.edits;
        ref_len += p.avg_ref;
        m += p.overlap.0;
        h += p.overlap.1;
        r += p.overlap.2;
    }
    let (precision, recall, f1) = prf_from_counts(m, h, r);
    let corpus = Scores {
        bleu: corpus_bleu.score,
        meteor: meteor.score(cfg.meteor_penalty),
        ter: if ref_len > 0.0 { edits as f64 / ref_len } else { 0.0 },
        precision,
        recall,
        f1,
        unigram_precision: corpus_bleu.precisions[0],
    };
    Ok(EvalReport {
        label: label.to_string(),
        corpus,
        sentences: parts.into_iter().map(|p| p.scores).collect(),
    })
}

type Row = (&'static str, fn(&Scores) -> f64, usize);

// BLEU, METEOR and TER are shown ×100, the rest as fractions.
const ROWS: [Row; 7] = [
    ("BLEU", |s| s.bleu * 100.0, 2),
    ("METEOR", |s| s.meteor * 100.0, 1),
    ("TER", |s| s.ter * 100.0, 1),
    ("Precision", |s| s.precision, 2),
    ("Recall", |s| s.recall, 2),
    ("F1", |s| s.f1, 2),
    ("Unigram precision", |s| s.unigram_precision, 2),
];

/// Corpus scores with one row per metric and one column per system, as an
/// aligned plain-text table and as TSV (four decimals).
pub fn render_tables(reports: &[EvalReport]) -> (String, String) {
    let mut cells: Vec<Vec<String>> = vec![std::iter::once("Evaluation Measures".to_string())
        .chain(reports.iter().map(|r| r.label.clone()))
        .collect()];
    let mut tsv = cells[0].join("\t") + "\n";
    for (name, f, prec) in ROWS {
        let mut row = vec![name.to_string()];
        let mut trow = vec![name.to_string()];
        for r in reports {
            row.push(format!("{:.*}", prec, f(&r.corpus)));
            trow.push(format!("{:.4}", f(&r.corpus)));
        }
        cells.push(row);
        tsv += &(trow.join("\t") + "\n");
    }
    let widths: Vec<usize> = (0..cells[0].len())
        .map(|c| cells.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut plain = String::new();
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (v, &w))| if i == 0 { format!("{v:<w$}") } else { format!("{v:>w$}") })
            .collect();
        let _ = writeln!(plain, "{}", line.join("  ").trim_end());
    }
    (plain, tsv)
}

impl EvalReport {
    /// One row per sentence with raw (unscaled) values.
    pub fn sentences_tsv(&self) -> String {
        let mut out = String::from("sentence\tbleu\tmeteor\tter\tprecision\trecall\tf1\tunigram_precision\n");
        for (i, s) in self.sentences.iter().enumerate() {
            let _ = writeln!(
                out,
                "{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}",
                i + 1,
                s.bleu,
                s.meteor,
                s.ter,
                s.precision,
                s.recall,
                s.f1,
                s.unigram_precision
            );
        }
        out
    }
}
