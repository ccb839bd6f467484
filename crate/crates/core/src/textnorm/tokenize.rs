use std::fmt;

use unicode_normalization::char::is_combining_mark;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TokenKind {
    Word,
    Punctuation,
    Number,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    surface: String,
    kind: TokenKind,
}

impl Token {
    /// Builds a token from a non-empty, whitespace-free surface; the kind is
    /// derived from its characters.
    pub fn new(surface: impl Into<String>) -> Option<Token> {
        let surface = surface.into();
        if surface.is_empty() || surface.chars().any(char::is_whitespace) {
            return None;
        }
        let kind = classify(&surface);
        Some(Token { surface, kind })
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn kind(&self) -> TokenKind {
        self.kind
    }

    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

/// ASCII digits plus both Arabic-Indic digit blocks.
pub fn is_digit(c: char) -> bool {
    c.is_ascii_digit() || ('\u{0660}'..='\u{0669}').contains(&c) || ('\u{06F0}'..='\u{06F9}').contains(&c)
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || is_combining_mark(c) || c == '\u{200C}' || c == '\u{200D}'
}

/// Characters allowed inside a word when flanked by word characters.
fn is_word_joiner(c: char) -> bool {
    matches!(c, '\'' | '-' | '\u{2019}')
}

pub fn classify(surface: &str) -> TokenKind {
    if !surface.is_empty() && surface.chars().all(is_digit) {
        TokenKind::Number
    } else if surface.chars().any(is_word_char) {
        TokenKind::Word
    } else {
        TokenKind::Punctuation
    }
}

/// A tokenized sentence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Sentence {
    tokens: Vec<Token>,
}

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Self {
        Sentence { tokens }
    }

    /// Splits an already tokenized line on whitespace without further
    /// segmentation (MT output, reference files).
    pub fn from_pretokenized(line: &str) -> Self {
        Sentence {
            tokens: line.split_whitespace().filter_map(Token::new).collect(),
        }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Token> {
        self.tokens.get(i)
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(Token::surface)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.surfaces().map(str::to_string).collect()
    }

    /// Replaces the surface at `i`, re-deriving its kind.
    pub fn replace(&mut self, i: usize, surface: &str) -> bool {
        match (self.tokens.get_mut(i), Token::new(surface)) {
            (Some(slot), Some(tok)) => {
                *slot = tok;
                true
            }
            _ => false,
        }
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&t.surface)?;
        }
        Ok(())
    }
}

fn flush(buf: &mut String, out: &mut Vec<Token>) {
    if !buf.is_empty() {
        out.extend(Token::new(std::mem::take(buf)));
    }
}

fn split_chunk(chunk: &str, out: &mut Vec<Token>) {
    let chars: Vec<char> = chunk.chars().collect();
    let mut word = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if is_word_char(c) {
            // digits and letters never share a token
            if let Some(last) = word.chars().last() {
                if is_digit(last) != is_digit(c) && !is_combining_mark(c) && !is_word_joiner(last) {
                    flush(&mut word, out);
                }
            }
            word.push(c);
            continue;
        }
        let internal = is_word_joiner(c)
            && !word.is_empty()
            && !word.chars().all(is_digit)
            && chars.get(i + 1).is_some_and(|&n| is_word_char(n) && !is_digit(n));
        if internal {
            word.push(c);
            continue;
        }
        flush(&mut word, out);
        out.push(Token::new(c.to_string()).expect("non-whitespace char"));
    }
    flush(&mut word, out);
}

/// Whitespace split, then punctuation detached into single-character tokens
/// and digit runs separated from letters. Apostrophes and hyphens between
/// letters stay inside the word.
pub fn tokenize(line: &str) -> Sentence {
    let mut tokens = Vec::new();
    for chunk in line.split_whitespace() {
        split_chunk(chunk, &mut tokens);
    }
    Sentence { tokens }
}
