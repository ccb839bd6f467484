use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use super::TextError;

const ZWNJ: char = '\u{200C}';
const ZWJ: char = '\u{200D}';

/// Ordered punctuation mapping applied after canonical composition.
///
/// Keys are matched longest-first at each position, so multi-codepoint keys
/// take precedence over their prefixes.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationTable {
    mapping: Vec<(String, String)>,
    max_key_chars: usize,
}

impl NormalizationTable {
    pub fn new<I, K, V>(pairs: I) -> Result<Self, TextError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let mut mapping: Vec<(String, String)> = Vec::new();
        for (k, v) in pairs {
            let (k, v) = (k.into(), v.into());
            if k.is_empty() {
                return Err(TextError::EmptyKey);
            }
            if mapping.iter().any(|(existing, _)| *existing == k) {
                return Err(TextError::DuplicateKey(k));
            }
            mapping.push((k, v));
        }
        // A replacement that contains any key would be rewritten again on a
        // second pass.
        for (k, v) in &mapping {
            if mapping.iter().any(|(other, _)| v.contains(other.as_str())) {
                return Err(TextError::NotFixedPoint {
                    key: k.clone(),
                    replacement: v.clone(),
                });
            }
        }
        let max_key_chars = mapping.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        Ok(NormalizationTable {
            mapping,
            max_key_chars,
        })
    }

    /// Urdu punctuation mapped onto its ASCII counterpart.
    pub fn urdu_default() -> Self {
        Self::new([
            ("\u{060C}", ","),  // ، Arabic comma
            ("\u{06D4}", "."),  // ۔ Urdu full stop
            ("\u{061B}", ";"),  // ؛ Arabic semicolon
            ("\u{061F}", "?"),  // ؟ Arabic question mark
            ("\u{2019}", "'"),  // ’
            ("\u{2018}", "'"),  // ‘
            ("\u{201C}", "\""), // “
            ("\u{201D}", "\""), // ”
        ])
        .expect("default table is well-formed")
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.mapping
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.mapping
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn apply(&self, text: &str) -> String {
        if self.mapping.is_empty() {
            return text.to_string();
        }
        let chars: Vec<char> = text.chars().collect();
        let mut out = String::with_capacity(text.len());
        let mut i = 0;
        'outer: while i < chars.len() {
            let longest = self.max_key_chars.min(chars.len() - i);
            for len in (1..=longest).rev() {
                let window: String = chars[i..i + len].iter().collect();
                if let Some(rep) = self.get(&window) {
                    out.push_str(rep);
                    i += len;
                    continue 'outer;
                }
            }
            out.push(chars[i]);
            i += 1;
        }
        out
    }
}

impl Default for NormalizationTable {
    fn default() -> Self {
        Self::urdu_default()
    }
}

fn is_joiner(c: char) -> bool {
    c == ZWNJ || c == ZWJ
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || is_combining_mark(c)
}

/// Drops ZWNJ/ZWJ unless both neighbouring non-joiner characters are part
/// of a word.
fn strip_boundary_joiners(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    for (i, &c) in chars.iter().enumerate() {
        if !is_joiner(c) {
            out.push(c);
            continue;
        }
        let prev = chars[..i].iter().rev().find(|&&p| !is_joiner(p));
        let next = chars[i + 1..].iter().find(|&&n| !is_joiner(n));
        if matches!((prev, next), (Some(&p), Some(&n)) if is_word_char(p) && is_word_char(n)) {
            out.push(c);
        }
    }
    out
}

fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Canonical composition, punctuation mapping, joiner cleanup and
/// whitespace collapsing. The result is a fixed point of this function.
pub fn normalize_text(line: &str, table: &NormalizationTable) -> String {
    let composed: String = line.nfc().collect();
    let mapped = table.apply(&composed);
    let stripped = strip_boundary_joiners(&mapped);
    // Removing a joiner can bring a base and a combining mark together.
    collapse_whitespace(&stripped).nfc().collect()
}

/// [`normalize_text`] over raw bytes, reporting the first invalid offset.
pub fn normalize_bytes(bytes: &[u8], table: &NormalizationTable) -> Result<String, TextError> {
    let text = std::str::from_utf8(bytes).map_err(|e| TextError::Decode {
        offset: e.valid_up_to(),
    })?;
    Ok(normalize_text(text, table))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm(s: &str) -> String {
        normalize_text(s, &NormalizationTable::urdu_default())
    }

    #[test]
    fn urdu_question_mark() {
        assert_eq!(norm("یہ کیا ہے؟"), "یہ کیا ہے?");
    }

    #[test]
    fn urdu_full_stop() {
        assert_eq!(norm("ٹھیک ہے۔"), "ٹھیک ہے.");
    }

    #[test]
    fn every_listed_punctuation_pair_is_mapped() {
        let table = NormalizationTable::urdu_default();
        let expected = [
            ("،", ","),
            ("۔", "."),
            ("؛", ";"),
            ("؟", "?"),
            ("’", "'"),
            ("“", "\""),
            ("”", "\""),
        ];
        for (urdu, ascii) in expected {
            assert_eq!(table.get(urdu), Some(ascii), "{urdu}");
            assert_eq!(norm(urdu), ascii);
        }
    }

    #[test]
    fn whitespace_collapsed_and_trimmed() {
        assert_eq!(norm("  a \t\t b\u{00A0} c  "), "a b c");
    }

    #[test]
    fn composes_to_nfc() {
        // alef + madda above composes to U+0622
        assert_eq!(norm("\u{0627}\u{0653}"), "\u{0622}");
        assert_eq!(norm("e\u{0301}"), "\u{00E9}");
    }

    #[test]
    fn joiners_kept_inside_words_only() {
        assert_eq!(norm("ab\u{200C}cd"), "ab\u{200C}cd");
        assert_eq!(norm("\u{200C}abc\u{200D} x"), "abc x");
        assert_eq!(norm("a \u{200C} b"), "a b");
    }

    #[test]
    fn joiner_before_mark_is_internal() {
        let once = norm("e\u{200D}\u{0301}");
        assert_eq!(once, "e\u{200D}\u{0301}");
        assert_eq!(norm(&once), once);
    }

    #[test]
    fn bytes_report_offset() {
        let table = NormalizationTable::urdu_default();
        let mut bytes = "ab".as_bytes().to_vec();
        bytes.push(0xFF);
        assert_eq!(
            normalize_bytes(&bytes, &table),
            Err(TextError::Decode { offset: 2 })
        );
        assert_eq!(normalize_bytes("ہے۔".as_bytes(), &table).unwrap(), "ہے.");
    }

    #[test]
    fn table_rejects_duplicates_and_non_fixed_points() {
        assert_eq!(
            NormalizationTable::new([("x", "y"), ("x", "z")]),
            Err(TextError::DuplicateKey("x".into()))
        );
        assert!(matches!(
            NormalizationTable::new([("a", "b"), ("b", "c")]),
            Err(TextError::NotFixedPoint { .. })
        ));
        assert_eq!(NormalizationTable::new([("", "c")]), Err(TextError::EmptyKey));
    }

    #[test]
    fn longest_key_wins() {
        let table = NormalizationTable::new([("ab", "X"), ("a", "Y")]).unwrap();
        assert_eq!(normalize_text("aab", &table), "YX");
    }
}
