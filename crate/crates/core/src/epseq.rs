//! Eventually periodic sequences of [`MultScalar`] in canonical form.

use alloc::vec::Vec;
use core::fmt;

use num_traits::One;

use crate::scalar::{lcm_usize, MultScalar, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EpSeqError {
    EmptyCycle,
}

impl fmt::Display for EpSeqError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpSeqError::EmptyCycle => f.write_str("repeating cycle must be nonempty"),
        }
    }
}

/// A one-indexed sequence `prefix ++ cycle ++ cycle ++ ...`.
///
/// Always canonical: the cycle is primitive (not a power of a shorter word)
/// and the prefix cannot be shortened by rotating the cycle. Two sequences are
/// equal as infinite sequences iff their canonical forms are identical, so the
/// derived `PartialEq` is sequence equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EpSeq {
    prefix: Vec<MultScalar>,
    cycle: Vec<MultScalar>,
}

impl EpSeq {
    pub fn new(prefix: Vec<MultScalar>, cycle: Vec<MultScalar>) -> Result<Self, EpSeqError> {
        if cycle.is_empty() {
            return Err(EpSeqError::EmptyCycle);
        }
        Ok(canonical(prefix, cycle))
    }

    /// Purely periodic sequence.
    pub fn periodic(cycle: Vec<MultScalar>) -> Result<Self, EpSeqError> {
        EpSeq::new(Vec::new(), cycle)
    }

    pub fn constant(c: MultScalar) -> Self {
        EpSeq { prefix: Vec::new(), cycle: alloc::vec![c] }
    }

    pub fn zeros() -> Self {
        EpSeq::constant(MultScalar::zero())
    }

    pub fn ones() -> Self {
        EpSeq::constant(MultScalar::one())
    }

    /// Builds the sequence `i -> f(i)` (one-indexed) given that it is periodic
    /// with period dividing `period` from index `preperiod + 1` on.
    pub fn from_fn(preperiod: usize, period: usize, mut f: impl FnMut(usize) -> MultScalar) -> Self {
        assert!(period > 0, "period must be positive");
        let prefix = (1..=preperiod).map(&mut f).collect();
        let cycle = (preperiod + 1..=preperiod + period).map(&mut f).collect();
        canonical(prefix, cycle)
    }

    pub fn prefix(&self) -> &[MultScalar] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[MultScalar] {
        &self.cycle
    }

    /// Canonical (minimal) period.
    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    /// Length of the canonical prefix.
    pub fn preperiod(&self) -> usize {
        self.prefix.len()
    }

    /// Number of indices `1..=n` whose values determine the whole sequence.
    pub fn span(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// `i`-th term, one-indexed. Panics for `i == 0`.
    pub fn term(&self, i: usize) -> &MultScalar {
        assert!(i >= 1, "sequences are one-indexed");
        let p = self.prefix.len();
        if i <= p {
            &self.prefix[i - 1]
        } else {
            &self.cycle[(i - p - 1) % self.cycle.len()]
        }
    }

    pub fn is_all_zero(&self) -> bool {
        self.prefix.is_empty() && self.cycle.len() == 1 && self.cycle[0].is_zero()
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.prefix.is_empty()
    }

    /// Distinct values taken by the sequence from index `from` on.
    pub fn tail_values(&self, from: usize) -> Vec<MultScalar> {
        let from = from.max(1);
        let end = from.max(self.prefix.len() + 1) + self.cycle.len() - 1;
        let mut out: Vec<MultScalar> = (from..=end).map(|i| self.term(i).clone()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Tail sequence `i -> term(i + l)`.
    pub fn shift_left(&self, l: usize) -> EpSeq {
        let p = self.prefix.len();
        if l <= p {
            return canonical(self.prefix[l..].to_vec(), self.cycle.clone());
        }
        let mut cycle = self.cycle.clone();
        let r = (l - p) % cycle.len();
        cycle.rotate_left(r);
        canonical(Vec::new(), cycle)
    }

    /// `k` zeros followed by the sequence.
    pub fn prepend_zeros(&self, k: usize) -> EpSeq {
        let mut prefix = alloc::vec![MultScalar::zero(); k];
        prefix.extend(self.prefix.iter().cloned());
        canonical(prefix, self.cycle.clone())
    }

    pub fn pointwise_mul(&self, other: &EpSeq) -> EpSeq {
        let pre = self.prefix.len().max(other.prefix.len());
        let per = lcm_usize(self.cycle.len(), other.cycle.len());
        EpSeq::from_fn(pre, per, |i| self.term(i).mul(other.term(i)))
    }

    pub fn map(&self, f: impl Fn(&MultScalar) -> MultScalar) -> EpSeq {
        canonical(self.prefix.iter().map(&f).collect(), self.cycle.iter().map(&f).collect())
    }

    /// Termwise `|a_i|^2` as real scalars.
    pub fn mag2_seq(&self) -> EpSeq {
        self.map(MultScalar::modulus)
    }

    pub fn conj_seq(&self) -> EpSeq {
        self.map(MultScalar::conj)
    }

    /// Product of `|a|^2` over one canonical cycle, i.e. `q^(2p)` for the
    /// periodic mean `q` and canonical period `p`.
    pub fn cycle_product_mag2(&self) -> Rational {
        self.cycle.iter().fold(Rational::one(), |acc, s| acc * s.mag2())
    }

    /// Product of `|a|^2` over `n` consecutive cycle positions, `n` a multiple
    /// of the canonical period.
    pub fn window_product_mag2(&self, n: usize) -> Rational {
        assert!(n.is_multiple_of(self.cycle.len()), "window must be a multiple of the period");
        let reps = n / self.cycle.len();
        num_traits::pow(self.cycle_product_mag2(), reps)
    }

    /// Index of the first nonzero term, if any.
    pub fn first_nonzero(&self) -> Option<usize> {
        (1..=self.span()).find(|&i| !self.term(i).is_zero())
    }

    pub fn all_terms(&self, pred: impl Fn(&MultScalar) -> bool) -> bool {
        self.prefix.iter().all(&pred) && self.cycle.iter().all(&pred)
    }

    /// `true` when every term has modulus 0 or 1.
    pub fn is_partial_unit(&self) -> bool {
        self.all_terms(MultScalar::is_partial_unit)
    }

    pub fn has_zero_term(&self) -> bool {
        !self.all_terms(|s| !s.is_zero())
    }

    /// Eventually constant with the given limit.
    pub fn limit(&self) -> Option<&MultScalar> {
        (self.cycle.len() == 1).then(|| &self.cycle[0])
    }
}

impl fmt::Debug for EpSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({:?})*", self.prefix, self.cycle)
    }
}

fn canonical(mut prefix: Vec<MultScalar>, mut cycle: Vec<MultScalar>) -> EpSeq {
    debug_assert!(!cycle.is_empty());
    let n = cycle.len();
    if let Some(d) = (1..n).find(|&d| n.is_multiple_of(d) && (d..n).all(|i| cycle[i] == cycle[i - d])) {
        cycle.truncate(d);
    }
    while let Some(last) = prefix.last() {
        if *last != cycle[cycle.len() - 1] {
            break;
        }
        prefix.pop();
        cycle.rotate_right(1);
    }
    EpSeq { prefix, cycle }
}
