//! Scalar metrics and classical oracles used to judge walk outputs.

use thiserror::Error;

use crate::engine::{ArcStateVector, WalkError};
use crate::language::{target_word, LanguageId, Symbol, Word};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("cut-point needs both in-language and out-of-language records")]
    UndefinedMargin,
    #[error("probability {0} is outside [0, 1]")]
    OutOfRange(f64),
}

/// One evaluated word.
#[derive(Debug, Clone, PartialEq)]
pub struct AcceptanceRecord {
    pub string: Word,
    pub in_language: bool,
    pub acceptance_probability: f64,
    pub fidelity: f64,
    pub jaro: f64,
}

/// `|⟨φ|ψ⟩|²`.
pub fn fidelity(psi: &ArcStateVector, phi: &ArcStateVector) -> Result<f64, AnalysisError> {
    Ok(phi.inner(psi)?.norm_sqr())
}

/// Jaro similarity of two words.
pub fn jaro(w1: &Word, w2: &Word) -> f64 {
    jaro_seq(w1.symbols(), w2.symbols())
}

/// Jaro similarity of two strings, compared by `char`.
pub fn jaro_str(s1: &str, s2: &str) -> f64 {
    let a: Vec<char> = s1.chars().collect();
    let b: Vec<char> = s2.chars().collect();
    jaro_seq(&a, &b)
}

/// Jaro similarity over arbitrary sequences.
///
/// Characters match when equal and no further apart than
/// `max(⌊max(|s1|, |s2|)/2⌋ − 1, 0)`. `t` is half the number of matched
/// characters that appear in a different order. Two empty sequences are
/// equal and score 1.
pub fn jaro_seq<T: PartialEq>(s1: &[T], s2: &[T]) -> f64 {
    if s1.is_empty() && s2.is_empty() {
        return 1.0;
    }
    if s1.is_empty() || s2.is_empty() {
        return 0.0;
    }
    let window = (s1.len().max(s2.len()) / 2).saturating_sub(1);
    let mut taken = vec![false; s2.len()];
    let mut matched1 = Vec::new();
    for (i, c) in s1.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(s2.len());
        if let Some(j) = (lo..hi).find(|&j| !taken[j] && s2[j] == *c) {
            taken[j] = true;
            matched1.push(c);
        }
    }
    let m = matched1.len();
    if m == 0 {
        return 0.0;
    }
    let matched2 = s2.iter().zip(&taken).filter(|(_, &t)| t).map(|(c, _)| c);
    let half_transpositions = matched1.iter().zip(matched2).filter(|(a, b)| **a != *b).count() as f64 / 2.0;
    let m = m as f64;
    (m / s1.len() as f64 + m / s2.len() as f64 + (m - half_transpositions) / m) / 3.0
}

/// The first `count` nonempty words, by length and then lexicographically
/// with `a < b`.
pub fn enumerate_strings(count: usize) -> Vec<Word> {
    strings().take(count).collect()
}

/// Every nonempty word in enumeration order.
pub fn strings() -> impl Iterator<Item = Word> {
    (1usize..).flat_map(words_of_length)
}

/// All `2ⁿ` words of length `n`, lexicographic with `a < b`.
pub fn words_of_length(n: usize) -> impl Iterator<Item = Word> {
    assert!(n < usize::BITS as usize, "word length {n} too large to enumerate");
    (0..1usize << n).map(move |bits| {
        Word::new(
            (0..n)
                .map(|i| {
                    if bits >> (n - 1 - i) & 1 == 1 {
                        Symbol::B
                    } else {
                        Symbol::A
                    }
                })
                .collect(),
        )
    })
}

/// Classical recognisers, written independently of the walk builders.
pub fn membership(language: &LanguageId, w: &Word) -> bool {
    let s = w.symbols();
    match language {
        LanguageId::Leq => {
            let a_run = s.iter().take_while(|&&c| c == Symbol::A).count();
            let rest = &s[a_run..];
            rest.iter().all(|&c| c == Symbol::B) && rest.len() == a_run
        }
        LanguageId::Lab => {
            s.len().is_multiple_of(2)
                && s.chunks(2).all(|p| p == [Symbol::A, Symbol::B])
        }
        LanguageId::SpecificWord(t) => t == w,
    }
}

/// The in-language word of length `n`, or of length `n − 1` when `n` has
/// none.
pub fn reference_word(language: &LanguageId, n: usize) -> Option<Word> {
    target_word(language, n).or_else(|| n.checked_sub(1).and_then(|m| target_word(language, m)))
}

/// Cut-point and error margin separating two classes of acceptance
/// probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutPoint {
    pub lambda: f64,
    pub epsilon: f64,
    pub bounded: bool,
}

/// `λ` is the midpoint between the largest out-of-language and the smallest
/// in-language acceptance; `ε` is half the gap, floored at zero.
pub fn cutpoint_margin(records: &[AcceptanceRecord]) -> Result<CutPoint, AnalysisError> {
    let (mut min_in, mut max_out) = (f64::INFINITY, f64::NEG_INFINITY);
    for r in records {
        if r.in_language {
            min_in = min_in.min(r.acceptance_probability);
        } else {
            max_out = max_out.max(r.acceptance_probability);
        }
    }
    if !min_in.is_finite() || !max_out.is_finite() {
        return Err(AnalysisError::UndefinedMargin);
    }
    let epsilon = ((min_in - max_out) / 2.0).max(0.0);
    Ok(CutPoint {
        lambda: (min_in + max_out) / 2.0,
        epsilon,
        bounded: epsilon > 0.0,
    })
}

/// Success probability of the best guess between two equally likely
/// inputs, given only whether the walk accepted: `½(1 + |pA − pB|)`.
pub fn discrimination_success(p_a: f64, p_b: f64) -> Result<f64, AnalysisError> {
    for p in [p_a, p_b] {
        if !(-1e-12..=1.0 + 1e-12).contains(&p) {
            return Err(AnalysisError::OutOfRange(p));
        }
    }
    Ok(0.5 * (1.0 + (p_a - p_b).abs()))
}
