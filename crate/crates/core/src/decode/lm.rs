use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Debug, Write as _};
use std::hash::Hash;

use super::DecodeError;
use crate::scalar::{parse_real, Real};

const BEGIN: &str = "<s>";
const END: &str = "</s>";

/// Unit an [`NGramLM`] is trained over: characters or words.
pub trait Symbol: Clone + Ord + Hash + Debug + Send + Sync {
    fn to_token(&self) -> String;
    fn from_token(token: &str) -> Option<Self>;
}

impl Symbol for char {
    fn to_token(&self) -> String {
        self.to_string()
    }

    fn from_token(token: &str) -> Option<Self> {
        let mut it = token.chars();
        match (it.next(), it.next()) {
            (Some(c), None) => Some(c),
            _ => None,
        }
    }
}

impl Symbol for String {
    fn to_token(&self) -> String {
        self.clone()
    }

    fn from_token(token: &str) -> Option<Self> {
        Some(token.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LmToken<S> {
    Begin,
    Sym(S),
    End,
}

impl<S: Symbol> LmToken<S> {
    fn to_token(&self) -> String {
        match self {
            LmToken::Begin => BEGIN.to_string(),
            LmToken::End => END.to_string(),
            LmToken::Sym(s) => s.to_token(),
        }
    }

    fn parse(tok: &str) -> Option<Self> {
        match tok {
            BEGIN => Some(LmToken::Begin),
            END => Some(LmToken::End),
            other => S::from_token(other).map(LmToken::Sym),
        }
    }
}

#[derive(Debug, Clone)]
struct ContextCounts<S> {
    total: u64,
    counts: BTreeMap<LmToken<S>, u64>,
}

impl<S> Default for ContextCounts<S> {
    fn default() -> Self {
        ContextCounts {
            total: 0,
            counts: BTreeMap::new(),
        }
    }
}

/// The last `order - 1` tokens of a partial sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LmState<S> {
    history: Vec<LmToken<S>>,
}

/// Interpolated Kneser-Ney n-gram model with a single absolute discount.
///
/// The highest order uses raw counts, lower orders use continuation counts
/// (number of distinct left extensions), and the unigram level interpolates
/// with a uniform distribution over the vocabulary plus the end token:
///
/// `p(w | h) = max(c(h w) − D, 0) / c(h) + D · N1+(h •) / c(h) · p(w | h')`
///
/// Symbols outside the vocabulary get the uniform floor mass without
/// renormalization.
#[derive(Debug, Clone)]
pub struct NGramLM<S, F> {
    order: usize,
    discount: F,
    vocab: BTreeSet<S>,
    /// `levels[k]` holds contexts of length `k`.
    levels: Vec<HashMap<Vec<LmToken<S>>, ContextCounts<S>>>,
}

impl<S: Symbol, F: Real> NGramLM<S, F> {
    pub fn train<I, W>(sequences: I, order: usize, discount: F) -> Result<Self, DecodeError>
    where
        I: IntoIterator<Item = W>,
        W: AsRef<[S]>,
    {
        let mut lm = Self::empty(order, discount)?;
        let mut top: HashMap<Vec<LmToken<S>>, ContextCounts<S>> = HashMap::new();
        let mut seen_any = false;
        for seq in sequences {
            seen_any = true;
            let seq = seq.as_ref();
            for s in seq {
                let tok = s.to_token();
                if tok.is_empty() || tok.chars().any(char::is_whitespace) || tok == BEGIN || tok == END {
                    return Err(DecodeError::InvalidSymbol(tok));
                }
                lm.vocab.insert(s.clone());
            }
            let mut padded: Vec<LmToken<S>> = vec![LmToken::Begin; order - 1];
            padded.extend(seq.iter().cloned().map(LmToken::Sym));
            padded.push(LmToken::End);
            for p in order - 1..padded.len() {
                let ctx = padded[p + 1 - order..p].to_vec();
                let entry = top.entry(ctx).or_default();
                entry.total += 1;
                *entry.counts.entry(padded[p].clone()).or_default() += 1;
            }
        }
        if !seen_any {
            return Err(DecodeError::EmptyTrainingData);
        }
        lm.install_top(top);
        Ok(lm)
    }

    /// Model without counts: every token has probability `1 / (|vocab| + 1)`.
    pub fn uniform<I: IntoIterator<Item = S>>(vocab: I, order: usize) -> Result<Self, DecodeError> {
        let mut lm = Self::empty(order, F::zero())?;
        lm.vocab.extend(vocab);
        Ok(lm)
    }

    fn empty(order: usize, discount: F) -> Result<Self, DecodeError> {
        if order == 0 {
            return Err(DecodeError::InvalidOrder);
        }
        if !(discount >= F::zero() && discount <= F::one()) {
            return Err(DecodeError::InvalidDiscount(discount.as_f64()));
        }
        Ok(NGramLM {
            order,
            discount,
            vocab: BTreeSet::new(),
            levels: vec![HashMap::new(); order],
        })
    }

    /// Installs highest-order counts and derives continuation counts below.
    fn install_top(&mut self, top: HashMap<Vec<LmToken<S>>, ContextCounts<S>>) {
        let n = self.order;
        self.levels[n - 1] = top;
        for k in (0..n - 1).rev() {
            let mut lower: HashMap<Vec<LmToken<S>>, ContextCounts<S>> = HashMap::new();
            for (ctx, cc) in &self.levels[k + 1] {
                let shorter = ctx[1..].to_vec();
                let entry = lower.entry(shorter).or_default();
                for w in cc.counts.keys() {
                    entry.total += 1;
                    *entry.counts.entry(w.clone()).or_default() += 1;
                }
            }
            self.levels[k] = lower;
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn discount(&self) -> F {
        self.discount
    }

    pub fn vocab(&self) -> &BTreeSet<S> {
        &self.vocab
    }

    pub fn contains(&self, s: &S) -> bool {
        self.vocab.contains(s)
    }

    /// Contexts observed at the highest order.
    pub fn contexts(&self) -> Vec<LmState<S>> {
        let mut v: Vec<_> = self.levels[self.order - 1]
            .keys()
            .map(|h| LmState { history: h.clone() })
            .collect();
        v.sort_by(|a, b| a.history.cmp(&b.history));
        v
    }

    /// `p(token | state)`.
    pub fn prob(&self, state: &LmState<S>, token: &LmToken<S>) -> F {
        let v = F::of_count(self.vocab.len() as u64 + 1);
        let mut p = F::one() / v;
        let hist = &state.history;
        for k in 0..self.order {
            // context of length k: the last k history tokens
            let ctx = &hist[hist.len() - k..];
            if let Some(cc) = self.levels[k].get(ctx) {
                let total = F::of_count(cc.total);
                let c = F::of_count(cc.counts.get(token).copied().unwrap_or(0));
                let types = F::of_count(cc.counts.len() as u64);
                let d = self.discount;
                p = (c - d).max(F::zero()) / total + d * types / total * p;
            }
        }
        p
    }

    pub fn start(&self) -> LmState<S> {
        LmState {
            history: vec![LmToken::Begin; self.order - 1],
        }
    }

    pub fn advance(&self, state: &LmState<S>, s: &S) -> LmState<S> {
        let mut history = state.history.clone();
        if self.order > 1 {
            history.remove(0);
            history.push(LmToken::Sym(s.clone()));
        }
        LmState { history }
    }

    /// `ln p(s | state)` and the successor state.
    pub fn score(&self, state: &LmState<S>, s: &S) -> (F, LmState<S>) {
        (self.prob(state, &LmToken::Sym(s.clone())).ln(), self.advance(state, s))
    }

    pub fn score_end(&self, state: &LmState<S>) -> F {
        self.prob(state, &LmToken::End).ln()
    }

    /// Log-probability of the symbols without the end token; appending a
    /// symbol never increases it.
    pub fn prefix_logprob(&self, seq: &[S]) -> F {
        self.prefix_from(&self.start(), seq).0
    }

    fn prefix_from(&self, state: &LmState<S>, seq: &[S]) -> (F, LmState<S>) {
        let mut state = state.clone();
        let mut total = F::zero();
        for s in seq {
            let (lp, next) = self.score(&state, s);
            total += lp;
            state = next;
        }
        (total, state)
    }

    /// Full-sequence log-probability including the end token.
    pub fn logprob(&self, seq: &[S]) -> F {
        let (lp, state) = self.prefix_from(&self.start(), seq);
        lp + self.score_end(&state)
    }

    /// Log-probability of `seq` continuing from `context` (which is not
    /// scored), optionally closing with the end token.
    pub fn window_logprob(&self, context: &[S], seq: &[S], close: bool) -> F {
        let mut state = self.start();
        for s in context {
            state = self.advance(&state, s);
        }
        let (lp, state) = self.prefix_from(&state, seq);
        if close {
            lp + self.score_end(&state)
        } else {
            lp
        }
    }

    /// Header line, then one `C<TAB>context<TAB>token<TAB>count` row per
    /// highest-order count (context tokens space-separated) and `V` rows for
    /// vocabulary entries. Lower orders are rebuilt on load.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "ngram-lm\torder={}\tdiscount={}", self.order, self.discount);
        for s in &self.vocab {
            let _ = writeln!(out, "V\t{}", s.to_token());
        }
        let mut rows: Vec<(&Vec<LmToken<S>>, &ContextCounts<S>)> = self.levels[self.order - 1].iter().collect();
        rows.sort_by(|a, b| a.0.cmp(b.0));
        for (ctx, cc) in rows {
            let ctx_text: Vec<String> = ctx.iter().map(LmToken::to_token).collect();
            for (tok, c) in &cc.counts {
                let _ = writeln!(out, "C\t{}\t{}\t{}", ctx_text.join(" "), tok.to_token(), c);
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, DecodeError> {
        let fail = |line: usize, m: &str| DecodeError::Format {
            line,
            message: m.to_string(),
        };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| fail(1, "missing header"))?;
        let fields: Vec<&str> = header.split('\t').collect();
        let (order, discount) = match fields.as_slice() {
            ["ngram-lm", o, d] => {
                let o = o.strip_prefix("order=").and_then(|v| v.parse::<usize>().ok());
                let d = d.strip_prefix("discount=").and_then(parse_real::<F>);
                (o.ok_or_else(|| fail(1, "bad order"))?, d.ok_or_else(|| fail(1, "bad discount"))?)
            }
            _ => return Err(fail(1, "expected ngram-lm header")),
        };
        let mut lm = Self::empty(order, discount)?;
        let mut top: HashMap<Vec<LmToken<S>>, ContextCounts<S>> = HashMap::new();
        for (n, line) in lines {
            let ln = n + 1;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match fields.as_slice() {
                ["V", tok] => {
                    lm.vocab.insert(S::from_token(tok).ok_or_else(|| fail(ln, "bad symbol"))?);
                }
                ["C", ctx, tok, count] => {
                    let ctx: Option<Vec<LmToken<S>>> = ctx.split(' ').filter(|t| !t.is_empty()).map(LmToken::parse).collect();
                    let ctx = ctx.ok_or_else(|| fail(ln, "bad context"))?;
                    if ctx.len() != order - 1 {
                        return Err(fail(ln, "context length does not match order"));
                    }
                    let tok = LmToken::parse(tok).ok_or_else(|| fail(ln, "bad token"))?;
                    let count: u64 = count.parse().map_err(|_| fail(ln, "bad count"))?;
                    let entry = top.entry(ctx).or_default();
                    entry.total += count;
                    *entry.counts.entry(tok).or_default() += count;
                }
                _ => return Err(fail(ln, "expected a V or C row")),
            }
        }
        lm.install_top(top);
        Ok(lm)
    }
}

impl<F: Real> NGramLM<char, F> {
    /// Trains over the characters of each word.
    pub fn train_words<I, W>(words: I, order: usize, discount: F) -> Result<Self, DecodeError>
    where
        I: IntoIterator<Item = W>,
        W: AsRef<str>,
    {
        let seqs: Vec<Vec<char>> = words.into_iter().map(|w| w.as_ref().chars().collect()).collect();
        if seqs.is_empty() {
            return Err(DecodeError::EmptyTrainingData);
        }
        Self::train(seqs, order, discount)
    }

    pub fn logprob_str(&self, s: &str) -> F {
        self.logprob(&s.chars().collect::<Vec<_>>())
    }
}

impl<S: Symbol> fmt::Display for LmToken<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_token())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type CharLm = NGramLM<char, f64>;

    fn toy(d: f64) -> CharLm {
        CharLm::train_words(["ab", "ab", "ac"], 2, d).unwrap()
    }

    fn state(lm: &CharLm, prev: char) -> LmState<char> {
        lm.advance(&lm.start(), &prev)
    }

    #[test]
    fn undiscounted_ratio() {
        let lm = toy(0.0);
        let p = lm.prob(&state(&lm, 'a'), &LmToken::Sym('b'));
        assert!((p - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn hand_computed_discounted_values() {
        // V = {a, b, c, </s>}: uniform 1/4.
        // continuation counts: a{<s>}=1, b{a}=1, c{a}=1, </s>{b,c}=2; total 5, 4 types.
        //   p1(a)=p1(b)=p1(c) = 0.25/5 + 0.75*4/5*1/4 = 0.2, p1(</s>) = 1.25/5 + 0.15 = 0.4
        // bigram context a: c(ab)=2, c(ac)=1, total 3, 2 types
        //   p(b|a) = 1.25/3 + 0.75*2/3*0.2 = 0.516666..., p(c|a) = 0.25/3 + 0.1
        // context <s>: c(<s> a)=3 -> p(a|<s>) = 2.25/3 + 0.25*0.2 = 0.8
        // context b: c(b </s>)=2 -> p(</s>|b) = 1.25/2 + 0.375*0.4 = 0.775
        let lm = toy(0.75);
        let sa = state(&lm, 'a');
        assert!((lm.prob(&sa, &LmToken::Sym('b')) - (1.25 / 3.0 + 0.1)).abs() < 1e-12);
        assert!((lm.prob(&sa, &LmToken::Sym('c')) - (0.25 / 3.0 + 0.1)).abs() < 1e-12);
        assert!((lm.prob(&sa, &LmToken::Sym('a')) - 0.1).abs() < 1e-12);
        assert!((lm.prob(&sa, &LmToken::End) - 0.2).abs() < 1e-12);
        assert!((lm.prob(&lm.start(), &LmToken::Sym('a')) - 0.8).abs() < 1e-12);
        assert!((lm.prob(&state(&lm, 'b'), &LmToken::End) - 0.775).abs() < 1e-12);
        let expected = (0.8 * (1.25 / 3.0 + 0.1) * 0.775f64).ln();
        assert!((lm.logprob_str("ab") - expected).abs() < 1e-12);
    }

    #[test]
    fn empty_string_scores_end_after_begin() {
        let lm = toy(0.75);
        // p(</s> | <s>) = 0 + 0.25 * 0.4
        assert!((lm.logprob_str("") - (0.25f64 * 0.4).ln()).abs() < 1e-12);
    }

    #[test]
    fn unseen_symbol_positive() {
        let lm = toy(0.75);
        let p = lm.prob(&state(&lm, 'a'), &LmToken::Sym('z'));
        assert!(p > 0.0);
        // unigram floor 0.75*4/5/4 = 0.15, bigram backoff 0.5
        assert!((p - 0.075).abs() < 1e-12);
    }

    #[test]
    fn normalizes_every_context() {
        for order in 1..=4 {
            let lm = CharLm::train_words(["abba", "cab", "a", "", "bbbc"], order, 0.6).unwrap();
            let mut tokens: Vec<LmToken<char>> = lm.vocab().iter().map(|&c| LmToken::Sym(c)).collect();
            tokens.push(LmToken::End);
            for ctx in lm.contexts().into_iter().chain([lm.start()]) {
                let sum: f64 = tokens.iter().map(|t| lm.prob(&ctx, t)).sum();
                assert!((sum - 1.0).abs() < 1e-8, "order {order}: {sum}");
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(CharLm::train_words(Vec::<String>::new(), 3, 0.75).unwrap_err(), DecodeError::EmptyTrainingData);
        assert_eq!(CharLm::train_words(["a"], 0, 0.75).unwrap_err(), DecodeError::InvalidOrder);
        assert!(matches!(CharLm::train_words(["a"], 2, 1.5), Err(DecodeError::InvalidDiscount(_))));
        assert!(matches!(CharLm::train_words(["a b"], 2, 0.5), Err(DecodeError::InvalidSymbol(_))));
        let words: Vec<Vec<String>> = vec![vec!["<s>".into()]];
        assert!(NGramLM::<String, f64>::train(words, 2, 0.5).is_err());
    }

    #[test]
    fn uniform_model() {
        let lm = CharLm::uniform(['x', 'y', 'z'], 3).unwrap();
        assert!((lm.logprob_str("xy") - 3.0 * 0.25f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn text_round_trip() {
        let lm = CharLm::train_words(["abba", "cab", "a"], 3, 0.75).unwrap();
        let text = lm.to_text();
        let back = CharLm::from_text(&text).unwrap();
        assert_eq!(back.to_text(), text);
        for w in ["ab", "bac", "", "zz"] {
            assert_eq!(back.logprob_str(w), lm.logprob_str(w));
        }
        assert!(CharLm::from_text("nonsense").is_err());
    }

    #[test]
    fn word_model_window() {
        let sents: Vec<Vec<String>> = ["my name is umar", "name is umar ."]
            .iter()
            .map(|s| s.split(' ').map(str::to_string).collect())
            .collect();
        let lm = NGramLM::<String, f64>::train(sents, 2, 0.75).unwrap();
        assert!(lm.contains(&"umar".to_string()));
        let w = |x: &str| vec![x.to_string()];
        let good = lm.window_logprob(&w("is"), &[String::from("umar"), String::from(".")], false);
        let bad = lm.window_logprob(&w("is"), &[String::from("omar"), String::from(".")], false);
        assert!(good > bad);
    }
}
