//! `translit`: pipeline driver for transliteration mining, OOV
//! transliteration, integration into MT output and evaluation.

mod error;
mod files;
mod settings;
mod stages;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{error, info};

use error::{CliError, Result};
use settings::Settings;

#[derive(Parser, Debug)]
#[command(name = "translit", version, about = "Transliteration mining and OOV handling for MT")]
struct Cli {
    /// Flat key = value configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized choices.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalize (and tokenize) one text file.
    Normalize(NormalizeArgs),
    /// Normalize, tokenize and length-filter a parallel corpus.
    Clean(CleanArgs),
    /// Corpus statistics table.
    Stats(StatsArgs),
    /// IBM Model 1 in both directions, symmetrized.
    Align(AlignArgs),
    /// Train the transliteration model and mine transliteration pairs.
    Mine(MineArgs),
    /// Train a character or word n-gram language model.
    TrainLm(TrainLmArgs),
    /// n-best transliterations of a word list.
    Transliterate(TransliterateArgs),
    /// Replace OOV words in MT output.
    Integrate(IntegrateArgs),
    /// Export OOV transliterations as a phrase table.
    ExportPt(ExportPtArgs),
    /// Score MT output against references.
    Evaluate(EvaluateArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Normalize(_) => "normalize",
            Command::Clean(_) => "clean",
            Command::Stats(_) => "stats",
            Command::Align(_) => "align",
            Command::Mine(_) => "mine",
            Command::TrainLm(_) => "train-lm",
            Command::Transliterate(_) => "transliterate",
            Command::Integrate(_) => "integrate",
            Command::ExportPt(_) => "export-pt",
            Command::Evaluate(_) => "evaluate",
        }
    }
}

#[derive(Args, Debug)]
pub struct NormalizeArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Tab-separated replacement table; defaults to the built-in Urdu table.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub tokenize: Option<bool>,
}

#[derive(Args, Debug)]
pub struct CleanArgs {
    #[arg(long)]
    pub src: Option<PathBuf>,
    #[arg(long)]
    pub tgt: Option<PathBuf>,
    #[arg(long)]
    pub out_src: Option<PathBuf>,
    #[arg(long)]
    pub out_tgt: Option<PathBuf>,
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub min_len: Option<usize>,
    #[arg(long)]
    pub max_len: Option<usize>,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long)]
    pub src: Option<PathBuf>,
    #[arg(long)]
    pub tgt: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Count target-side unique words case-insensitively.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub fold_case: Option<bool>,
}

#[derive(Args, Debug)]
pub struct AlignArgs {
    #[arg(long)]
    pub src: Option<PathBuf>,
    #[arg(long)]
    pub tgt: Option<PathBuf>,
    /// Pharaoh-format output.
    #[arg(long)]
    pub alignments: Option<PathBuf>,
    /// Also write 1-to-1 candidate word pairs here.
    #[arg(long)]
    pub candidates: Option<PathBuf>,
    #[arg(long)]
    pub iterations: Option<usize>,
    /// intersection, union, grow-diag or grow-diag-final.
    #[arg(long)]
    pub heuristic: Option<String>,
    #[arg(long)]
    pub min_chars: Option<usize>,
}

#[derive(Args, Debug)]
pub struct MineArgs {
    /// Candidate pairs; when absent they are extracted from src, tgt and
    /// alignments.
    #[arg(long)]
    pub candidates: Option<PathBuf>,
    #[arg(long)]
    pub src: Option<PathBuf>,
    #[arg(long)]
    pub tgt: Option<PathBuf>,
    #[arg(long)]
    pub alignments: Option<PathBuf>,
    /// Trained model output.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Mined pairs output.
    #[arg(long)]
    pub mined: Option<PathBuf>,
    /// Per-iteration statistics output.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub convergence: Option<f64>,
    #[arg(long)]
    pub max_word_chars: Option<usize>,
    #[arg(long)]
    pub initial_lambda: Option<f64>,
    /// Also allow one-to-two and two-to-one character segments.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub digraphs: Option<bool>,
    #[arg(long)]
    pub min_chars: Option<usize>,
}

#[derive(Args, Debug)]
pub struct TrainLmArgs {
    /// Tokenized training text.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Mined pairs; a character LM is then trained on their target words
    /// instead of the corpus vocabulary.
    #[arg(long)]
    pub mined: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// char or word.
    #[arg(long)]
    pub level: Option<String>,
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub discount: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct BeamArgs {
    #[arg(long)]
    pub beam_width: Option<usize>,
    #[arg(long)]
    pub nbest: Option<usize>,
    #[arg(long)]
    pub tm_weight: Option<f64>,
    #[arg(long)]
    pub lm_weight: Option<f64>,
    #[arg(long)]
    pub max_length_ratio: Option<f64>,
}

#[derive(Args, Debug)]
pub struct TransliterateArgs {
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub lm: Option<PathBuf>,
    /// One word per line.
    #[arg(long)]
    pub words: Option<PathBuf>,
    /// n-best TSV output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub beam: BeamArgs,
}

#[derive(Args, Debug)]
pub struct IntegrateArgs {
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub lm: Option<PathBuf>,
    /// MT output, one tokenized sentence per line.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// 1 (replace), 2 (rescore with word LM) or 3 (phrase-table export).
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub word_lm: Option<PathBuf>,
    #[arg(long)]
    pub word_lm_weight: Option<f64>,
    /// Target vocabulary, one word per line.
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    #[command(flatten)]
    pub beam: BeamArgs,
}

#[derive(Args, Debug)]
pub struct ExportPtArgs {
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub lm: Option<PathBuf>,
    /// MT output to collect OOV words from.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Explicit word list, one per line.
    #[arg(long)]
    pub words: Option<PathBuf>,
    #[arg(long)]
    pub phrase_table: Option<PathBuf>,
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    #[command(flatten)]
    pub beam: BeamArgs,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// System output; repeat for several systems.
    #[arg(long)]
    pub hyp: Vec<PathBuf>,
    /// Column label per hypothesis file.
    #[arg(long)]
    pub label: Vec<String>,
    /// Reference file; repeat for multiple references.
    #[arg(long = "ref")]
    pub refs: Vec<PathBuf>,
    /// Plain-text report; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub tsv: Option<PathBuf>,
    /// Per-sentence scores of the first system.
    #[arg(long)]
    pub sentences: Option<PathBuf>,
    #[arg(long)]
    pub max_n: Option<usize>,
    /// linear or cubed.
    #[arg(long)]
    pub meteor_penalty: Option<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub ter_shifts: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub lowercase: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub strip_punct: Option<bool>,
}

fn run(cli: Cli) -> Result<()> {
    let stage = cli.command.name();
    let settings = Settings::load(stage, cli.config.as_deref())?;
    let threads = settings.get(cli.threads, "threads", 1usize)?;
    let seed = settings.get(cli.seed, "seed", 0u64)?;
    if threads == 0 {
        return Err(CliError::usage("threads must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start thread pool: {e}")))?;
    info!("stage={stage} event=start threads={threads} seed={seed}");
    let started = std::time::Instant::now();
    pool.install(|| match cli.command {
        Command::Normalize(a) => stages::text::normalize(&settings, a),
        Command::Clean(a) => stages::text::clean(&settings, a),
        Command::Stats(a) => stages::text::stats(&settings, a),
        Command::Align(a) => stages::mining::align(&settings, a),
        Command::Mine(a) => stages::mining::mine(&settings, a),
        Command::TrainLm(a) => stages::decoding::train_lm(&settings, a),
        Command::Transliterate(a) => stages::decoding::transliterate(&settings, a),
        Command::Integrate(a) => stages::decoding::integrate(&settings, a),
        Command::ExportPt(a) => stages::decoding::export_pt(&settings, a),
        Command::Evaluate(a) => stages::evaluation::evaluate(&settings, a),
    })?;
    info!(
        "stage={stage} event=done elapsed_ms={}",
        started.elapsed().as_millis()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .format_target(false)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            error!("{e}");
            ExitCode::from(e.code())
        }
    }
}
