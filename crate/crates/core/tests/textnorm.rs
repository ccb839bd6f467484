use proptest::prelude::*;

use translit_core::textnorm::{
    corpus_stats, normalize_text, tokenize, CleanBounds, NormalizationTable, ParallelCorpus, Sentence, TokenKind,
};

fn urdu_line() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop::sample::select(vec![
            'ا', 'ب', 'پ', 'ت', 'ک', 'گ', 'ی', 'ے', 'ہ', 'ں', 'ن', 'و', '،', '۔', '؟', '؛', '٫', '۱', '۲', '0', '7', ' ', ' ',
            '\u{200C}', '\u{064B}', '"', '(', ')', '-', 'a', 'Z', '\t',
        ]),
        0..40,
    )
    .prop_map(|v| v.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn normalize_is_idempotent(line in urdu_line()) {
        let table = NormalizationTable::urdu_default();
        let once = normalize_text(&line, &table);
        prop_assert_eq!(normalize_text(&once, &table), once);
    }

    #[test]
    fn tokenize_is_idempotent(line in urdu_line()) {
        let table = NormalizationTable::urdu_default();
        let toks = tokenize(&normalize_text(&line, &table));
        let joined = toks.to_strings().join(" ");
        prop_assert_eq!(tokenize(&joined), toks.clone());
        prop_assert_eq!(Sentence::from_pretokenized(&joined), toks);
    }

    #[test]
    fn tokens_have_no_whitespace(line in urdu_line()) {
        for t in tokenize(&line).tokens() {
            prop_assert!(!t.surface().is_empty());
            prop_assert!(!t.surface().chars().any(char::is_whitespace));
        }
    }

    #[test]
    fn stats_totals_add_up(lines in prop::collection::vec(("[a-c]{1,3}( [a-c]{1,3}){0,5}", "[x-z]{1,3}( [X-Z]{1,3}){0,5}"), 1..20)) {
        let src: Vec<&str> = lines.iter().map(|l| l.0.as_str()).collect();
        let tgt: Vec<&str> = lines.iter().map(|l| l.1.as_str()).collect();
        let bounds = CleanBounds::new(1, 100).unwrap();
        let (corpus, report) = ParallelCorpus::from_lines(&src, &tgt, &NormalizationTable::urdu_default(), bounds).unwrap();
        prop_assert_eq!(report.kept + report.dropped, report.read);
        let stats = corpus_stats(&corpus, true).unwrap();
        let src_total: usize = corpus.pairs().iter().map(|p| p.0.len()).sum();
        let tgt_total: usize = corpus.pairs().iter().map(|p| p.1.len()).sum();
        prop_assert_eq!(stats.sentences, corpus.len());
        prop_assert_eq!(stats.src.total_words, src_total);
        prop_assert_eq!(stats.tgt.total_words, tgt_total);
        prop_assert!(stats.src.unique_words <= src_total);
        prop_assert!(stats.src.min_len as f64 <= stats.src.avg_len && stats.src.avg_len <= stats.src.max_len as f64);
        let folded = corpus_stats(&corpus, false).unwrap();
        prop_assert!(stats.tgt.unique_words <= folded.tgt.unique_words);
    }
}

#[test]
fn urdu_punctuation_maps_to_ascii() {
    let table = NormalizationTable::urdu_default();
    let out = normalize_text("کیا، ہاں؛ نہیں؟ ٹھیک۔", &table);
    assert!(out.contains(',') && out.contains(';') && out.contains('?') && out.contains('.'));
    assert!(!out.contains('۔'));
    let kinds: Vec<TokenKind> = tokenize(&out).tokens().iter().map(|t| t.kind()).collect();
    assert_eq!(kinds.last(), Some(&TokenKind::Punctuation));
}

#[test]
fn clean_bounds_reject_inverted_range() {
    assert!(CleanBounds::new(5, 2).is_err());
}
