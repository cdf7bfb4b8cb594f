//! Single-diagonal operators on `l^2(N)` and words in `T`, `T*`.
//!
//! A [`DiagOp`] with offset `k` and weights `a` acts on the standard basis by
//!
//! ```text
//! k >= 0:  D e_i = a_i e_{i+k}
//! k <  0:  D e_i = 0 for i <= -k,   D e_i = a_{i+k} e_{i+k} otherwise
//! ```
//!
//! so the weight attached to the arrow `e_i -> e_{i+k}` is always indexed by
//! the smaller of the two basis indices. Every word in a weighted shift and its
//! adjoint is such an operator, and eventually periodic weights stay
//! eventually periodic under composition.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::epseq::EpSeq;
use crate::scalar::{lcm_usize, MultScalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagError {
    AllZeroWeights,
}

impl fmt::Display for DiagError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagError::AllZeroWeights => f.write_str("weight sequence is identically zero"),
        }
    }
}

/// `D_k^(a)`. The zero operator is stored as offset 0 with zero weights.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiagOp {
    offset: i64,
    weights: EpSeq,
}

impl DiagOp {
    pub fn new(offset: i64, weights: EpSeq) -> Self {
        if weights.is_all_zero() {
            return DiagOp::zero();
        }
        DiagOp { offset, weights }
    }

    pub fn zero() -> Self {
        DiagOp { offset: 0, weights: EpSeq::zeros() }
    }

    pub fn identity() -> Self {
        DiagOp { offset: 0, weights: EpSeq::ones() }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn weights(&self) -> &EpSeq {
        &self.weights
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_all_zero()
    }

    /// Coefficient of `e_{i+k}` in `D e_i`; zero when `i + k < 1`.
    pub fn coefficient(&self, i: usize) -> MultScalar {
        let target = i as i64 + self.offset;
        if i == 0 || target < 1 {
            return MultScalar::zero();
        }
        self.weights.term(i.min(target as usize)).clone()
    }

    /// Matrix entry `<D e_col, e_row>`, one-indexed.
    pub fn entry(&self, row: usize, col: usize) -> MultScalar {
        if row as i64 - col as i64 != self.offset {
            return MultScalar::zero();
        }
        self.coefficient(col)
    }
}

impl fmt::Debug for DiagOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D[{}]{:?}", self.offset, self.weights)
    }
}

/// `T` with weights `a`: `T e_i = a_i e_{i+1}`.
pub fn shift_op(alpha: &EpSeq) -> Result<DiagOp, DiagError> {
    if alpha.is_all_zero() {
        return Err(DiagError::AllZeroWeights);
    }
    Ok(DiagOp::new(1, alpha.clone()))
}

/// `T*`: `T* e_{i+1} = conj(a_i) e_i`, `T* e_1 = 0`.
pub fn adjoint_shift_op(alpha: &EpSeq) -> Result<DiagOp, DiagError> {
    if alpha.is_all_zero() {
        return Err(DiagError::AllZeroWeights);
    }
    Ok(DiagOp::new(-1, alpha.conj_seq()))
}

/// Composition `a ∘ b` (`b` applied first).
pub fn diag_mul(a: &DiagOp, b: &DiagOp) -> DiagOp {
    if a.is_zero() || b.is_zero() {
        return DiagOp::zero();
    }
    let (k, l) = (a.offset, b.offset);
    let offset = k + l;
    // Source index whose arrow carries result weight j.
    let shift = if offset < 0 { (-offset) as usize } else { 0 };
    let preperiod = a.weights.preperiod().max(b.weights.preperiod())
        + (k.unsigned_abs() + l.unsigned_abs()) as usize
        + 1;
    let period = lcm_usize(a.weights.period(), b.weights.period());
    let weights = EpSeq::from_fn(preperiod, period, |j| {
        let i = j + shift;
        let mid = i as i64 + l;
        if mid < 1 {
            return MultScalar::zero();
        }
        b.coefficient(i).mul(&a.coefficient(mid as usize))
    });
    DiagOp::new(offset, weights)
}

/// Hilbert-space adjoint.
pub fn adjoint(a: &DiagOp) -> DiagOp {
    DiagOp::new(-a.offset, a.weights.conj_seq())
}

pub fn op_equal(a: &DiagOp, b: &DiagOp) -> bool {
    a == b
}

/// One letter of a word: the shift or its adjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Gen,
    Adj,
}

impl Letter {
    pub fn flip(self) -> Letter {
        match self {
            Letter::Gen => Letter::Adj,
            Letter::Adj => Letter::Gen,
        }
    }

    pub fn offset(self) -> i64 {
        match self {
            Letter::Gen => 1,
            Letter::Adj => -1,
        }
    }
}

/// Nonempty product of `T` and `T*`, leftmost letter applied last.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordParseError {
    Empty,
    UnexpectedChar(char),
    BadExponent(String),
}

impl fmt::Display for WordParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordParseError::Empty => f.write_str("empty word"),
            WordParseError::UnexpectedChar(c) => write!(f, "unexpected character {c:?} in word"),
            WordParseError::BadExponent(s) => write!(f, "bad exponent {s:?}"),
        }
    }
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Option<Word> {
        (!letters.is_empty()).then_some(Word(letters))
    }

    pub fn letter(l: Letter) -> Word {
        Word(alloc::vec![l])
    }

    pub fn gen() -> Word {
        Word::letter(Letter::Gen)
    }

    pub fn adj() -> Word {
        Word::letter(Letter::Adj)
    }

    /// `l^n`, `n >= 1`.
    pub fn power(l: Letter, n: usize) -> Word {
        assert!(n >= 1, "empty power");
        Word(alloc::vec![l; n])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `#T - #T*`.
    pub fn offset(&self) -> i64 {
        self.0.iter().map(|l| l.offset()).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The word of the adjoint: reversed with every letter flipped.
    pub fn star(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.flip()).collect())
    }

    /// All words of the given degree in lexicographic order (`T` before `T*`).
    pub fn all_of_degree(d: usize) -> Vec<Word> {
        if d == 0 {
            return Vec::new();
        }
        (0..1u64 << d)
            .map(|bits| {
                Word((0..d)
                    .map(|pos| if bits >> (d - 1 - pos) & 1 == 0 { Letter::Gen } else { Letter::Adj })
                    .collect())
            })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let run = self.0[i..].iter().take_while(|&&x| x == l).count();
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            f.write_str(if l == Letter::Gen { "T" } else { "T*" })?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = WordParseError;

    /// Parses `T`, `T*` tokens with optional `^n` powers, e.g. `"T*^2 T^2 T*"`.
    fn from_str(s: &str) -> Result<Word, WordParseError> {
        let chars: Vec<char> = s.chars().collect();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            match chars[i] {
                c if c.is_whitespace() || c == '.' || c == '·' => i += 1,
                'T' => {
                    i += 1;
                    let mut l = Letter::Gen;
                    if i < chars.len() && chars[i] == '*' {
                        l = Letter::Adj;
                        i += 1;
                    }
                    let mut n = 1usize;
                    if i < chars.len() && chars[i] == '^' {
                        i += 1;
                        let start = i;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                        let digits: String = chars[start..i].iter().collect();
                        n = digits
                            .parse()
                            .ok()
                            .filter(|&n: &usize| n >= 1)
                            .ok_or(WordParseError::BadExponent(digits))?;
                    }
                    letters.extend(core::iter::repeat_n(l, n));
                }
                c => return Err(WordParseError::UnexpectedChar(c)),
            }
        }
        Word::new(letters).ok_or(WordParseError::Empty)
    }
}

/// `T` and `T*` for a fixed weight sequence, for evaluating many words.
#[derive(Clone, Debug)]
pub struct ShiftPair {
    pub gen: DiagOp,
    pub adj: DiagOp,
}

impl ShiftPair {
    pub fn new(alpha: &EpSeq) -> Result<Self, DiagError> {
        Ok(ShiftPair { gen: shift_op(alpha)?, adj: adjoint_shift_op(alpha)? })
    }

    pub fn letter(&self, l: Letter) -> &DiagOp {
        match l {
            Letter::Gen => &self.gen,
            Letter::Adj => &self.adj,
        }
    }

    pub fn eval(&self, w: &Word) -> DiagOp {
        let mut it = w.letters().iter();
        let first = self.letter(*it.next().expect("words are nonempty")).clone();
        it.fold(first, |acc, &l| diag_mul(&acc, self.letter(l)))
    }
}

/// Evaluates a word as a left fold of compositions.
pub fn word_eval(w: &Word, alpha: &EpSeq) -> Result<DiagOp, DiagError> {
    Ok(ShiftPair::new(alpha)?.eval(w))
}
