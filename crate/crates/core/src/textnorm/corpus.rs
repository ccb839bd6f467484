use std::collections::HashSet;
use std::fmt::Write as _;

use super::normalize::{normalize_text, NormalizationTable};
use super::tokenize::{tokenize, Sentence};
use super::TextError;

/// Inclusive token-count bounds applied to both sides of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CleanBounds {
    min: usize,
    max: usize,
}

impl CleanBounds {
    pub fn new(min: usize, max: usize) -> Result<Self, TextError> {
        if min < 1 || max < min {
            return Err(TextError::InvalidBounds { min, max });
        }
        Ok(CleanBounds { min, max })
    }

    pub fn min(&self) -> usize {
        self.min
    }

    pub fn max(&self) -> usize {
        self.max
    }

    fn admits(&self, len: usize) -> bool {
        (self.min..=self.max).contains(&len)
    }
}

impl Default for CleanBounds {
    fn default() -> Self {
        CleanBounds { min: 1, max: 80 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CleanDecision {
    Keep,
    Drop,
}

pub fn clean_pair(src: &Sentence, tgt: &Sentence, bounds: CleanBounds) -> CleanDecision {
    if bounds.admits(src.len()) && bounds.admits(tgt.len()) {
        CleanDecision::Keep
    } else {
        CleanDecision::Drop
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CleaningReport {
    pub read: usize,
    pub kept: usize,
    pub dropped: usize,
}

/// Sentence-aligned corpus; every side holds at least one token.
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelCorpus {
    pairs: Vec<(Sentence, Sentence)>,
    src_lang: String,
    tgt_lang: String,
}

impl ParallelCorpus {
    /// Pairs with an empty side are discarded.
    pub fn new(
        pairs: Vec<(Sentence, Sentence)>,
        src_lang: impl Into<String>,
        tgt_lang: impl Into<String>,
    ) -> Self {
        ParallelCorpus {
            pairs: pairs
                .into_iter()
                .filter(|(s, t)| !s.is_empty() && !t.is_empty())
                .collect(),
            src_lang: src_lang.into(),
            tgt_lang: tgt_lang.into(),
        }
    }

    /// Normalizes, tokenizes and cleans two line-aligned sides.
    pub fn from_lines<S, T>(
        src_lines: &[S],
        tgt_lines: &[T],
        table: &NormalizationTable,
        bounds: CleanBounds,
    ) -> Result<(Self, CleaningReport), TextError>
    where
        S: AsRef<str>,
        T: AsRef<str>,
    {
        if src_lines.len() != tgt_lines.len() {
            return Err(TextError::LineCountMismatch {
                src: src_lines.len(),
                tgt: tgt_lines.len(),
            });
        }
        let mut report = CleaningReport {
            read: src_lines.len(),
            ..Default::default()
        };
        let mut pairs = Vec::new();
        for (s, t) in src_lines.iter().zip(tgt_lines) {
            let src = tokenize(&normalize_text(s.as_ref(), table));
            let tgt = tokenize(&normalize_text(t.as_ref(), table));
            match clean_pair(&src, &tgt, bounds) {
                CleanDecision::Keep => pairs.push((src, tgt)),
                CleanDecision::Drop => report.dropped += 1,
            }
        }
        report.kept = pairs.len();
        Ok((ParallelCorpus::new(pairs, "ur", "en"), report))
    }

    pub fn with_languages(mut self, src: impl Into<String>, tgt: impl Into<String>) -> Self {
        self.src_lang = src.into();
        self.tgt_lang = tgt.into();
        self
    }

    pub fn pairs(&self) -> &[(Sentence, Sentence)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn src_lang(&self) -> &str {
        &self.src_lang
    }

    pub fn tgt_lang(&self) -> &str {
        &self.tgt_lang
    }

    /// Same corpus with the sides exchanged.
    pub fn swapped(&self) -> ParallelCorpus {
        ParallelCorpus {
            pairs: self.pairs.iter().map(|(s, t)| (t.clone(), s.clone())).collect(),
            src_lang: self.tgt_lang.clone(),
            tgt_lang: self.src_lang.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SideStats {
    pub avg_len: f64,
    pub min_len: usize,
    pub max_len: usize,
    pub total_words: usize,
    pub unique_words: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    pub sentences: usize,
    pub src: SideStats,
    pub tgt: SideStats,
    pub src_label: String,
    pub tgt_label: String,
}

fn side_stats<'a>(sentences: impl Iterator<Item = &'a Sentence>, fold_case: bool) -> SideStats {
    let mut unique: HashSet<String> = HashSet::new();
    let (mut min_len, mut max_len, mut total, mut n) = (usize::MAX, 0, 0, 0);
    for s in sentences {
        n += 1;
        min_len = min_len.min(s.len());
        max_len = max_len.max(s.len());
        total += s.len();
        for w in s.surfaces() {
            unique.insert(if fold_case { w.to_lowercase() } else { w.to_string() });
        }
    }
    SideStats {
        avg_len: total as f64 / n as f64,
        min_len,
        max_len,
        total_words: total,
        unique_words: unique.len(),
    }
}

/// Source-side word types are case-sensitive; `fold_target_case` lowercases
/// the target side before counting types.
pub fn corpus_stats(corpus: &ParallelCorpus, fold_target_case: bool) -> Result<CorpusStats, TextError> {
    if corpus.is_empty() {
        return Err(TextError::EmptyCorpus);
    }
    Ok(CorpusStats {
        sentences: corpus.len(),
        src: side_stats(corpus.pairs.iter().map(|(s, _)| s), false),
        tgt: side_stats(corpus.pairs.iter().map(|(_, t)| t), fold_target_case),
        src_label: language_label(&corpus.src_lang),
        tgt_label: language_label(&corpus.tgt_lang),
    })
}

fn language_label(tag: &str) -> String {
    match tag {
        "ur" => "Urdu".to_string(),
        "en" => "English".to_string(),
        other => other.to_string(),
    }
}

impl CorpusStats {
    /// Two-column table: one row per statistic, one column per side.
    pub fn render_table(&self) -> String {
        let rows: [(&str, String, String); 5] = [
            ("# of sentences", self.sentences.to_string(), String::new()),
            (
                "Avg. sentence length",
                format!("{:.2}", self.src.avg_len),
                format!("{:.2}", self.tgt.avg_len),
            ),
            (
                "Min , Max words in sentence",
                format!("{}, {}", self.src.min_len, self.src.max_len),
                format!("{}, {}", self.tgt.min_len, self.tgt.max_len),
            ),
            (
                "# of total words",
                self.src.total_words.to_string(),
                self.tgt.total_words.to_string(),
            ),
            (
                "# of unique words",
                self.src.unique_words.to_string(),
                self.tgt.unique_words.to_string(),
            ),
        ];
        let label_w = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0);
        let src_w = rows
            .iter()
            .map(|r| r.1.chars().count())
            .chain(std::iter::once(self.src_label.chars().count()))
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:label_w$}  {:src_w$}  {}",
            "", self.src_label, self.tgt_label
        );
        for (label, s, t) in rows {
            let line = format!("{label:label_w$}  {s:src_w$}  {t}");
            let _ = writeln!(out, "{}", line.trim_end());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sent(s: &str) -> Sentence {
        Sentence::from_pretokenized(s)
    }

    fn words(n: usize) -> Sentence {
        sent(&(0..n).map(|i| format!("w{i}")).collect::<Vec<_>>().join(" "))
    }

    #[test]
    fn cleaning_decisions() {
        let b = CleanBounds::default();
        assert_eq!(clean_pair(&words(81), &words(30), b), CleanDecision::Drop);
        assert_eq!(clean_pair(&words(5), &words(4), b), CleanDecision::Keep);
        assert_eq!(clean_pair(&words(0), &words(3), b), CleanDecision::Drop);
        assert_eq!(clean_pair(&words(80), &words(1), b), CleanDecision::Keep);
    }

    #[test]
    fn invalid_bounds() {
        assert_eq!(CleanBounds::new(0, 5), Err(TextError::InvalidBounds { min: 0, max: 5 }));
        assert_eq!(CleanBounds::new(6, 5), Err(TextError::InvalidBounds { min: 6, max: 5 }));
        assert!(CleanBounds::new(5, 5).is_ok());
    }

    #[test]
    fn stats_sums() {
        let c = ParallelCorpus::new(
            vec![(words(3), words(4)), (words(5), words(6))],
            "ur",
            "en",
        );
        let st = corpus_stats(&c, false).unwrap();
        assert_eq!(st.sentences, 2);
        assert_eq!(st.src.total_words, 8);
        assert_eq!(st.tgt.total_words, 10);
        assert_eq!((st.src.min_len, st.src.max_len), (3, 5));
        assert_eq!(st.src.avg_len, 4.0);
        assert_eq!(st.tgt.avg_len, 5.0);
    }

    #[test]
    fn distinct_tokens_unique_equals_total() {
        let c = ParallelCorpus::new(vec![(sent("a b c"), sent("x y"))], "ur", "en");
        let st = corpus_stats(&c, false).unwrap();
        assert_eq!(st.src.unique_words, st.src.total_words);
        assert_eq!(st.tgt.unique_words, 2);
    }

    #[test]
    fn repeated_sentence_hand_count() {
        // source tokens: a b | a b | a c  -> total 6, types {a,b,c}
        // target tokens: X y | x y | x z  -> total 6, types {X,x,y,z} or {x,y,z} folded
        let c = ParallelCorpus::new(
            vec![
                (sent("a b"), sent("X y")),
                (sent("a b"), sent("x y")),
                (sent("a c"), sent("x z")),
            ],
            "ur",
            "en",
        );
        let st = corpus_stats(&c, false).unwrap();
        assert_eq!((st.src.total_words, st.src.unique_words), (6, 3));
        assert_eq!(st.tgt.unique_words, 4);
        let folded = corpus_stats(&c, true).unwrap();
        assert_eq!(folded.tgt.unique_words, 3);
        let cs = ParallelCorpus::new(vec![(sent("A a"), sent("q"))], "ur", "en");
        assert_eq!(corpus_stats(&cs, true).unwrap().src.unique_words, 2);
    }

    #[test]
    fn empty_corpus_is_error() {
        let c = ParallelCorpus::new(vec![(sent(""), sent("x"))], "ur", "en");
        assert!(c.is_empty());
        assert_eq!(corpus_stats(&c, false), Err(TextError::EmptyCorpus));
    }

    #[test]
    fn from_lines_cleans_and_normalizes() {
        let src = ["یہ کیا ہے؟", "", "ایک"];
        let tgt = ["what is this ?", "nothing", "one"];
        let (c, report) =
            ParallelCorpus::from_lines(&src, &tgt, &NormalizationTable::default(), CleanBounds::default())
                .unwrap();
        assert_eq!(report, CleaningReport { read: 3, kept: 2, dropped: 1 });
        assert_eq!(c.pairs()[0].0.to_string(), "یہ کیا ہے ?");
        assert!(matches!(
            ParallelCorpus::from_lines(&src[..1], &tgt, &NormalizationTable::default(), CleanBounds::default()),
            Err(TextError::LineCountMismatch { src: 1, tgt: 3 })
        ));
    }

    #[test]
    fn table_has_every_row() {
        let c = ParallelCorpus::new(vec![(sent("a b"), sent("x"))], "ur", "en");
        let table = corpus_stats(&c, false).unwrap().render_table();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[0].contains("Urdu") && lines[0].contains("English"));
        assert!(lines[3].starts_with("Min , Max words in sentence") && lines[3].ends_with("1, 1"));
    }
}
