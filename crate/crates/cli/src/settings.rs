use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::warn;

use crate::error::{CliError, Result};

const ENV_PREFIX: &str = "TF_";

/// Every key a configuration file may set, optionally as `stage.key`.
const KNOWN_KEYS: &[&str] = &[
    "alignments", "beam_width", "candidates", "convergence", "corpus", "digraphs", "discount", "fold_case",
    "heuristic", "hyp", "initial_lambda", "input", "iterations", "label", "level", "lm",
    "lm_weight", "lowercase", "max_iterations", "max_len", "max_length_ratio", "max_n",
    "max_word_chars", "meteor_penalty", "method", "min_chars", "min_len", "mined", "model",
    "nbest", "order", "out_src", "out_tgt", "output", "phrase_table", "ref", "seed", "sentences",
    "src", "strip_punct", "table", "tgt", "threads", "threshold", "tm_weight", "tokenize", "trace",
    "tsv", "vocab", "word_lm", "word_lm_weight", "words",
];

/// Resolves option values. Precedence, highest first: command-line flag,
/// `TF_<KEY>` environment variable, `<stage>.<key>` in the config file,
/// `<key>` in the config file, built-in default. Relative paths from the
/// config file are taken relative to the file's directory.
pub struct Settings {
    stage: String,
    file: BTreeMap<String, String>,
    file_dir: Option<PathBuf>,
    env: BTreeMap<String, String>,
}

enum Source {
    Env,
    File,
}

impl Settings {
    pub fn load(stage: &str, config: Option<&Path>) -> Result<Self> {
        let mut file = BTreeMap::new();
        let mut file_dir = None;
        if let Some(path) = config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
            file = parse_config(&text).map_err(|e| e.in_file(path))?;
            file_dir = path.parent().map(Path::to_path_buf);
        }
        let env = std::env::vars()
            .filter_map(|(k, v)| k.strip_prefix(ENV_PREFIX).map(|k| (k.to_ascii_lowercase(), v)))
            .collect();
        Ok(Settings {
            stage: stage.to_string(),
            file,
            file_dir,
            env,
        })
    }

    #[cfg(test)]
    fn from_parts(stage: &str, file: BTreeMap<String, String>, env: BTreeMap<String, String>) -> Self {
        Settings {
            stage: stage.to_string(),
            file,
            file_dir: None,
            env,
        }
    }

    fn lookup(&self, key: &str) -> Option<(Source, &str)> {
        if let Some(v) = self.env.get(key) {
            return Some((Source::Env, v));
        }
        let scoped = format!("{}.{key}", self.stage);
        self.file
            .get(&scoped)
            .or_else(|| self.file.get(key))
            .map(|v| (Source::File, v.as_str()))
    }

    pub fn opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.lookup(key) {
            None => Ok(None),
            Some((_, raw)) => raw
                .trim()
                .parse()
                .map(Some)
                .map_err(|_| CliError::usage(format!("invalid value {raw:?} for {key}"))),
        }
    }

    pub fn get<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        Ok(self.opt(flag, key)?.unwrap_or(default))
    }

    /// Comma-separated list; an explicit flag list wins when non-empty.
    pub fn list(&self, flag: Vec<String>, key: &str) -> Vec<String> {
        if !flag.is_empty() {
            return flag;
        }
        self.lookup(key)
            .map(|(_, raw)| {
                raw.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn opt_path(&self, flag: Option<PathBuf>, key: &str) -> Option<PathBuf> {
        if flag.is_some() {
            return flag;
        }
        self.lookup(key).map(|(src, raw)| self.resolve(src, raw.trim()))
    }

    fn resolve(&self, src: Source, raw: &str) -> PathBuf {
        let p = PathBuf::from(raw);
        match (src, &self.file_dir) {
            (Source::File, Some(dir)) if p.is_relative() => dir.join(p),
            _ => p,
        }
    }

    /// Resolves each entry of a comma-separated path list.
    pub fn path_list(&self, flag: Vec<PathBuf>, key: &str) -> Vec<PathBuf> {
        if !flag.is_empty() {
            return flag;
        }
        match self.lookup(key) {
            None => Vec::new(),
            Some((src, raw)) => {
                let from_file = matches!(src, Source::File);
                raw.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| self.resolve(if from_file { Source::File } else { Source::Env }, s))
                    .collect()
            }
        }
    }

    pub fn output(&self, flag: Option<PathBuf>, key: &str) -> Result<PathBuf> {
        self.opt_path(flag, key)
            .ok_or_else(|| CliError::usage(format!("missing required path {key}")))
    }

    /// A required input path that must already exist.
    pub fn input(&self, flag: Option<PathBuf>, key: &str) -> Result<PathBuf> {
        let p = self.output(flag, key)?;
        check_exists(&p)?;
        Ok(p)
    }

    pub fn opt_input(&self, flag: Option<PathBuf>, key: &str) -> Result<Option<PathBuf>> {
        match self.opt_path(flag, key) {
            Some(p) => {
                check_exists(&p)?;
                Ok(Some(p))
            }
            None => Ok(None),
        }
    }
}

pub fn check_exists(p: &Path) -> Result<()> {
    if p.exists() {
        Ok(())
    } else {
        Err(CliError::usage(format!("input {} does not exist", p.display())))
    }
}

/// `key = value` lines; `#` starts a comment line.
fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::usage(format!("line {}: expected key = value", n + 1)));
        };
        let key = k.trim().replace('-', "_");
        if key.is_empty() {
            return Err(CliError::usage(format!("line {}: empty key", n + 1)));
        }
        let bare = key.rsplit('.').next().unwrap_or(&key);
        if !KNOWN_KEYS.contains(&bare) {
            warn!("config line {}: unknown key {key:?}", n + 1);
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::usage(format!("line {}: duplicate key {key}", n + 1)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let file = parse_config("# comment\nbeam_width = 8\ntransliterate.beam_width = 12\nnbest=3\n").unwrap();
        let env: BTreeMap<String, String> = [("nbest".to_string(), "5".to_string())].into();
        let s = Settings::from_parts("transliterate", file.clone(), env.clone());
        assert_eq!(s.get(None, "beam_width", 16usize).unwrap(), 12);
        assert_eq!(s.get(Some(2usize), "beam_width", 16).unwrap(), 2);
        assert_eq!(s.get(None, "nbest", 10usize).unwrap(), 5);
        assert_eq!(s.get(None, "order", 3usize).unwrap(), 3);
        let other = Settings::from_parts("mine", file, env);
        assert_eq!(other.get(None, "beam_width", 16usize).unwrap(), 8);
    }

    #[test]
    fn bad_lines() {
        assert!(parse_config("novalue\n").is_err());
        assert!(parse_config("a=1\na=2\n").is_err());
        let s = Settings::from_parts("x", parse_config("order = three").unwrap(), BTreeMap::new());
        assert!(matches!(s.get(None, "order", 3usize), Err(CliError::Usage(_))));
    }

    #[test]
    fn lists() {
        let s = Settings::from_parts("evaluate", parse_config("ref = a.txt, b.txt").unwrap(), BTreeMap::new());
        assert_eq!(s.path_list(Vec::new(), "ref"), [PathBuf::from("a.txt"), PathBuf::from("b.txt")]);
        assert_eq!(s.list(vec!["x".into()], "label"), ["x"]);
    }
}
