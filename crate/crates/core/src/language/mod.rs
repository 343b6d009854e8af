//! Acceptor walks for binary formal languages.
//!
//! Two input styles are supported. The spatial style lays the whole word out
//! at once, one pair of input nodes per position, and funnels it through
//! Grover hubs in three steps ([`build_spatial`]). The sequential style feeds
//! the word down a double-lane rail into a small processing gadget
//! ([`build_sequential`], [`build_sequential_word`]).

mod sequential;
mod serial;
mod spatial;
mod walk;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{VertexId, WalkError};

pub use sequential::{build_sequential, build_sequential_word, encode_sequential};
pub use serial::{parse_walk, WalkDocument, FORMAT_VERSION};
pub use spatial::{build_spatial, encode_spatial, encode_spatial_prefix};
pub use walk::{BuiltWalk, InputSlots, Mode, Outcome, WalkParts};

/// Tolerance on per-position norms of a [`QuantumWord`].
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error("{language} has no word of length {n}")]
    NoTarget { language: LanguageId, n: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("{language} has no {mode} builder")]
    Unsupported { language: LanguageId, mode: Mode },
    #[error("input has length {found}, walk expects {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("input of length {found} exceeds rail capacity {capacity}")]
    Capacity { capacity: usize, found: usize },
    #[error("position {position} has norm {norm}, expected {alpha}")]
    Normalization { position: usize, norm: f64, alpha: f64 },
    #[error("vertex {0:?} is in both the accept and reject regions")]
    RegionOverlap(VertexId),
    #[error("walk has no reject region to invert")]
    NotInvertible,
    #[error("coin table is not unitary (residual {0:e})")]
    NonUnitary(f64),
    #[error("invalid input map: {0}")]
    InputMap(String),
    #[error("walk is {found}, operation needs {expected}")]
    ModeMismatch { expected: Mode, found: Mode },
    #[error("invalid symbol {0:?}; the alphabet is {{a, b}}")]
    InvalidSymbol(char),
    #[error("invalid language {0:?}; expected eq, ab or word:<w>")]
    InvalidLanguage(String),
    #[error("invalid walk document: {0}")]
    Document(String),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    A,
    B,
}

impl Symbol {
    pub fn as_char(self) -> char {
        match self {
            Symbol::A => 'a',
            Symbol::B => 'b',
        }
    }

    pub fn other(self) -> Self {
        match self {
            Symbol::A => Symbol::B,
            Symbol::B => Symbol::A,
        }
    }
}

impl TryFrom<char> for Symbol {
    type Error = BuildError;

    fn try_from(c: char) -> Result<Self, BuildError> {
        match c {
            'a' => Ok(Symbol::A),
            'b' => Ok(Symbol::B),
            other => Err(BuildError::InvalidSymbol(other)),
        }
    }
}

/// A finite word over `{a, b}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Self(symbols)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn repeat(s: Symbol, n: usize) -> Self {
        Self(vec![s; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Number of positions where `self` and `other` carry the same symbol.
    pub fn matches(&self, other: &Word) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a == b).count()
    }
}

impl FromStr for Word {
    type Err = BuildError;

    fn from_str(s: &str) -> Result<Self, BuildError> {
        s.chars().map(Symbol::try_from).collect::<Result<_, _>>().map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

/// The languages with acceptor builders.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LanguageId {
    /// `aᵐbᵐ`, `m ≥ 0`.
    Leq,
    /// `(ab)ᵐ`, `m ≥ 0`.
    Lab,
    /// Exactly one nonempty word.
    SpecificWord(Word),
}

impl LanguageId {
    pub fn specific(w: Word) -> Result<Self, BuildError> {
        if w.is_empty() {
            Err(BuildError::EmptyInput)
        } else {
            Ok(LanguageId::SpecificWord(w))
        }
    }
}

impl FromStr for LanguageId {
    type Err = BuildError;

    fn from_str(s: &str) -> Result<Self, BuildError> {
        match s {
            "eq" => Ok(LanguageId::Leq),
            "ab" => Ok(LanguageId::Lab),
            _ => match s.strip_prefix("word:") {
                Some(w) if !w.is_empty() => Ok(LanguageId::SpecificWord(w.parse()?)),
                _ => Err(BuildError::InvalidLanguage(s.to_owned())),
            },
        }
    }
}

impl fmt::Display for LanguageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LanguageId::Leq => f.write_str("eq"),
            LanguageId::Lab => f.write_str("ab"),
            LanguageId::SpecificWord(w) => write!(f, "word:{w}"),
        }
    }
}

impl Serialize for LanguageId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LanguageId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The unique word of length `n` in `language`, if there is one.
pub fn target_word(language: &LanguageId, n: usize) -> Option<Word> {
    match language {
        LanguageId::Leq if n.is_multiple_of(2) => {
            Some(Word::repeat(Symbol::A, n / 2).concat(&Word::repeat(Symbol::B, n / 2)))
        }
        LanguageId::Lab if n.is_multiple_of(2) => Some(Word(
            [Symbol::A, Symbol::B].iter().copied().cycle().take(n).collect(),
        )),
        LanguageId::SpecificWord(w) if w.len() == n => Some(w.clone()),
        _ => None,
    }
}

/// Per-position superposition `x·a + y·b` with a common norm `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumWord {
    positions: Vec<[Complex64; 2]>,
    alpha: f64,
}

impl QuantumWord {
    /// Validates that every position carries the same norm `α > 0`.
    pub fn new(positions: Vec<[Complex64; 2]>) -> Result<Self, BuildError> {
        let first = positions.first().ok_or(BuildError::EmptyInput)?;
        let alpha = (first[0].norm_sqr() + first[1].norm_sqr()).sqrt();
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(BuildError::Normalization {
                position: 0,
                norm: alpha,
                alpha,
            });
        }
        for (position, [x, y]) in positions.iter().enumerate() {
            let sq = x.norm_sqr() + y.norm_sqr();
            // Written so that a NaN norm also fails.
            let uniform = (sq - alpha * alpha).abs() <= NORM_TOLERANCE;
            if !uniform {
                return Err(BuildError::Normalization {
                    position,
                    norm: sq.sqrt(),
                    alpha,
                });
            }
        }
        Ok(Self { positions, alpha })
    }

    /// Classical encoding with `α = 1/√n`.
    pub fn classical(w: &Word) -> Result<Self, BuildError> {
        if w.is_empty() {
            return Err(BuildError::EmptyInput);
        }
        let alpha = Complex64::new(1.0 / (w.len() as f64).sqrt(), 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let positions = w
            .symbols()
            .iter()
            .map(|s| match s {
                Symbol::A => [alpha, zero],
                Symbol::B => [zero, alpha],
            })
            .collect();
        Ok(Self {
            positions,
            alpha: alpha.re,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn positions(&self) -> &[[Complex64; 2]] {
        &self.positions
    }

    /// Checks `α = 1/√len`, the normalisation every encoder uses.
    pub(crate) fn check_unit_total(&self) -> Result<(), BuildError> {
        let want = 1.0 / (self.len() as f64).sqrt();
        if (self.alpha * self.alpha - want * want).abs() > NORM_TOLERANCE {
            return Err(BuildError::Normalization {
                position: 0,
                norm: self.alpha,
                alpha: want,
            });
        }
        Ok(())
    }
}

/// Superposition of two equal-length words at mixing angle `theta`.
///
/// Agreeing positions carry the full weight on the shared symbol. Differing
/// positions carry `α·cos θ` on `w1`'s symbol and `α·sin θ` on `w2`'s.
pub fn superpose_words(w1: &Word, w2: &Word, theta: f64) -> Result<QuantumWord, BuildError> {
    if w1.len() != w2.len() {
        return Err(BuildError::LengthMismatch {
            expected: w1.len(),
            found: w2.len(),
        });
    }
    if w1.is_empty() {
        return Err(BuildError::EmptyInput);
    }
    let alpha = 1.0 / (w1.len() as f64).sqrt();
    let (c, s) = (alpha * theta.cos(), alpha * theta.sin());
    let positions = w1
        .symbols()
        .iter()
        .zip(w2.symbols())
        .map(|(&s1, &s2)| {
            let mut v = [Complex64::new(0.0, 0.0); 2];
            if s1 == s2 {
                v[lane(s1)] = Complex64::new(alpha, 0.0);
            } else {
                v[lane(s1)] = Complex64::new(c, 0.0);
                v[lane(s2)] = Complex64::new(s, 0.0);
            }
            v
        })
        .collect();
    QuantumWord::new(positions)
}

pub(crate) fn lane(s: Symbol) -> usize {
    match s {
        Symbol::A => 0,
        Symbol::B => 1,
    }
}
