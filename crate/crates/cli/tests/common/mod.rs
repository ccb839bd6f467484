//! Synthetic data shared by the CLI tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Arabic-block letters used for source words.
pub const SOURCE_LETTERS: &[char] = &[
    'ا', 'ب', 'پ', 'ت', 'ٹ', 'ج', 'چ', 'ح', 'خ', 'د', 'ر', 'ز', 'س', 'ش', 'ف', 'ق', 'ک', 'گ', 'ل', 'م',
];
pub const TARGET_LETTERS: &[char] = &[
    'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j', 'k', 'l', 'm', 'n', 'o', 'p', 'q', 'r', 's', 't',
];

pub struct CipherPair {
    pub source: String,
    pub target: String,
    pub is_translit: bool,
}

pub struct CipherFixture {
    pub cipher: BTreeMap<char, char>,
    pub pairs: Vec<CipherPair>,
}

impl CipherFixture {
    pub fn encode(&self, word: &str) -> String {
        word.chars().map(|c| self.cipher[&c]).collect()
    }
}

pub fn random_word(rng: &mut ChaCha8Rng, letters: &[char], min: usize, max: usize) -> String {
    let len = rng.gen_range(min..=max);
    (0..len).map(|_| *letters.choose(rng).unwrap()).collect()
}

/// Each character independently suffers a random substitution, deletion or
/// insertion with probability `noise`.
fn corrupt(rng: &mut ChaCha8Rng, word: &str, noise: f64) -> String {
    let mut out = String::new();
    for c in word.chars() {
        if rng.gen_bool(noise) {
            match rng.gen_range(0..3) {
                0 => out.push(*TARGET_LETTERS.choose(rng).unwrap()),
                1 => {}
                _ => {
                    out.push(c);
                    out.push(*TARGET_LETTERS.choose(rng).unwrap());
                }
            }
        } else {
            out.push(c);
        }
    }
    if out.is_empty() {
        word.to_string()
    } else {
        out
    }
}

/// `n_translit` cipher-encoded pairs (with character noise) followed by
/// `n_random` unrelated pairs, shuffled.
pub fn cipher_fixture(seed: u64, n_translit: usize, n_random: usize, noise: f64) -> CipherFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffled = TARGET_LETTERS.to_vec();
    shuffled.shuffle(&mut rng);
    let cipher: BTreeMap<char, char> = SOURCE_LETTERS.iter().copied().zip(shuffled).collect();
    let mut fx = CipherFixture { cipher, pairs: Vec::new() };
    for _ in 0..n_translit {
        let src = random_word(&mut rng, SOURCE_LETTERS, 3, 8);
        let clean = fx.encode(&src);
        let target = corrupt(&mut rng, &clean, noise);
        fx.pairs.push(CipherPair { source: src, target, is_translit: true });
    }
    for _ in 0..n_random {
        fx.pairs.push(CipherPair {
            source: random_word(&mut rng, SOURCE_LETTERS, 3, 8),
            target: random_word(&mut rng, TARGET_LETTERS, 3, 8),
            is_translit: false,
        });
    }
    fx.pairs.shuffle(&mut rng);
    fx
}

/// A small Urdu-script / Latin parallel corpus: sentences built from a
/// fixed bilingual dictionary plus one cipher-encoded name each, so the
/// names surface as 1-to-1 alignment candidates.
pub struct ParallelFixture {
    pub src: Vec<String>,
    pub tgt: Vec<String>,
    pub names: Vec<(String, String)>,
}

pub fn parallel_fixture(seed: u64, sentences: usize) -> ParallelFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fx = cipher_fixture(seed, 0, 0, 0.0);
    let dict: Vec<(String, String)> = (0..24)
        .map(|_| {
            let u = random_word(&mut rng, &['ع', 'غ', 'ہ', 'ی', 'و', 'ن'], 2, 4);
            let e = random_word(&mut rng, &['u', 'v', 'w', 'x', 'y', 'z'], 2, 4);
            (u, e)
        })
        .collect();
    let names: Vec<(String, String)> = (0..sentences / 2)
        .map(|_| {
            let s = random_word(&mut rng, SOURCE_LETTERS, 3, 7);
            let t = fx.encode(&s);
            (s, t)
        })
        .collect();
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    for i in 0..sentences {
        let (ns, nt) = &names[i % names.len()];
        let k = rng.gen_range(2..5);
        let words: Vec<&(String, String)> = (0..k).map(|_| dict.choose(&mut rng).unwrap()).collect();
        let pos = rng.gen_range(0..=k);
        let mut s: Vec<&str> = words.iter().map(|w| w.0.as_str()).collect();
        let mut t: Vec<&str> = words.iter().map(|w| w.1.as_str()).collect();
        s.insert(pos, ns);
        t.insert(pos, nt);
        src.push(s.join(" ") + " ۔");
        tgt.push(t.join(" ") + " .");
    }
    ParallelFixture { src, tgt, names }
}
