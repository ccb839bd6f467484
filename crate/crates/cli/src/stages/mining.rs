use std::fmt::Write as _;

use log::{debug, info, warn};
use rayon::prelude::*;
use translit_core::align::{
    extract_candidates, parse_pharaoh, symmetrize, train_model1, viterbi_align, AlignmentLinkSet,
    CandidateFilter, Symmetrization, WordPairList,
};
use translit_core::mine::{em_train, mine_pairs, EmConfig, Shape};
use translit_core::textnorm::ParallelCorpus;

use super::read_parallel;
use crate::error::{CliError, Result};
use crate::files::{join_lines, read_lines, read_text, write_atomic};
use crate::settings::Settings;
use crate::{AlignArgs, MineArgs};

fn candidate_filter(s: &Settings, flag: Option<usize>) -> Result<CandidateFilter> {
    Ok(CandidateFilter {
        min_chars: s.get(flag, "min_chars", CandidateFilter::default().min_chars)?,
    })
}

fn align_corpus(corpus: &ParallelCorpus, iterations: usize, heuristic: Symmetrization) -> Result<Vec<AlignmentLinkSet>> {
    let fwd = train_model1::<f64>(corpus, iterations)?;
    let swapped = corpus.swapped();
    let bwd = train_model1::<f64>(&swapped, iterations)?;
    info!(
        "stage=align model1 fwd_ll={} bwd_ll={}",
        fwd.log_likelihoods.last().copied().unwrap_or(f64::NAN),
        bwd.log_likelihoods.last().copied().unwrap_or(f64::NAN)
    );
    Ok(corpus
        .pairs()
        .par_iter()
        .map(|(e, f)| {
            let a = viterbi_align(&fwd.table, e, f);
            let b = viterbi_align(&bwd.table, f, e).transposed();
            symmetrize(&a, &b, heuristic)
        })
        .collect())
}

pub fn align(s: &Settings, a: AlignArgs) -> Result<()> {
    let src = s.input(a.src, "src")?;
    let tgt = s.input(a.tgt, "tgt")?;
    let out = s.output(a.alignments, "alignments")?;
    let cand_out = s.opt_path(a.candidates, "candidates");
    let iterations = s.get(a.iterations, "iterations", 5)?;
    let heuristic: Symmetrization = s
        .get(a.heuristic, "heuristic", "grow-diag".to_string())?
        .parse()
        .map_err(CliError::from)?;
    let filter = candidate_filter(s, a.min_chars)?;
    let corpus = read_parallel(&src, &tgt)?;
    let links = align_corpus(&corpus, iterations, heuristic)?;
    write_atomic(&out, &join_lines(links.iter().map(ToString::to_string)))?;
    if let Some(path) = cand_out {
        let cands = extract_candidates(&corpus, &links, filter)?;
        write_atomic(&path, &cands.to_tsv())?;
        info!("stage=align candidates={}", cands.len());
    }
    info!("stage=align sentences={} heuristic={heuristic}", corpus.len());
    Ok(())
}

fn load_candidates(s: &Settings, a: &MineArgs) -> Result<WordPairList> {
    if let Some(path) = s.opt_input(a.candidates.clone(), "candidates")? {
        return WordPairList::from_tsv(&read_text(&path)?).map_err(|e| CliError::from(e).in_file(&path));
    }
    let src = s.input(a.src.clone(), "src")?;
    let tgt = s.input(a.tgt.clone(), "tgt")?;
    let al = s.input(a.alignments.clone(), "alignments")?;
    let corpus = read_parallel(&src, &tgt)?;
    let lines = read_lines(&al)?;
    if lines.len() != corpus.len() {
        return Err(CliError::data(format!(
            "{}: {} alignment lines for {} sentence pairs",
            al.display(),
            lines.len(),
            corpus.len()
        )));
    }
    let links = corpus
        .pairs()
        .iter()
        .zip(&lines)
        .map(|((e, f), l)| parse_pharaoh(l, e.len(), f.len()))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| CliError::from(e).in_file(&al))?;
    Ok(extract_candidates(&corpus, &links, candidate_filter(s, a.min_chars)?)?)
}

pub fn mine(s: &Settings, a: MineArgs) -> Result<()> {
    let model_out = s.output(a.model.clone(), "model")?;
    let mined_out = s.output(a.mined.clone(), "mined")?;
    let trace_out = s.opt_path(a.trace.clone(), "trace");
    let defaults = EmConfig::default();
    let cfg = EmConfig {
        max_iterations: s.get(a.max_iterations, "max_iterations", defaults.max_iterations)?,
        convergence: s.get(a.convergence, "convergence", defaults.convergence)?,
        max_word_chars: s.get(a.max_word_chars, "max_word_chars", defaults.max_word_chars)?,
        initial_lambda: s.get(a.initial_lambda, "initial_lambda", defaults.initial_lambda)?,
        shapes: if s.get(a.digraphs, "digraphs", false)? { Shape::ALL.to_vec() } else { Shape::BASIC.to_vec() },
        ..defaults
    };
    let threshold = s.get(a.threshold, "threshold", 0.5)?;
    let cands = load_candidates(s, &a)?;
    let (model, trace) = em_train::<f64>(&cands, &cfg)?;
    for (i, it) in trace.iterations.iter().enumerate() {
        debug!(
            "stage=mine iteration={} ll={} lambda={}",
            i + 1,
            it.log_likelihood,
            it.lambda
        );
    }
    if !trace.skipped.is_empty() {
        warn!("stage=mine skipped_pairs={}", trace.skipped.len());
    }
    let mined = mine_pairs(&model, &cands, threshold)?;
    write_atomic(&model_out, &model.to_tsv())?;
    write_atomic(&mined_out, &mined.to_tsv())?;
    if let Some(path) = trace_out {
        let mut t = String::from("iteration\tlog_likelihood\tlambda\ttheta_sum\tmax_lattice_mismatch\n");
        for (i, it) in trace.iterations.iter().enumerate() {
            let _ = writeln!(
                t,
                "{}\t{}\t{}\t{}\t{}",
                i + 1,
                it.log_likelihood,
                it.lambda,
                it.theta_sum,
                it.max_lattice_mismatch
            );
        }
        write_atomic(&path, &t)?;
    }
    info!(
        "stage=mine candidates={} iterations={} converged={} lambda={} mined={}",
        cands.len(),
        trace.iterations.len(),
        trace.converged,
        model.lambda(),
        mined.len()
    );
    Ok(())
}
