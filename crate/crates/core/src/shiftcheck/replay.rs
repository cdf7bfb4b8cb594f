//! Re-checks a verdict's certificate against the weights.
//!
//! Nothing here calls the decision procedure: hypotheses are re-derived by
//! scanning terms, products are recomputed, and word witnesses are evaluated
//! again from scratch.

use core::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::reciprocal::{self, MagObstruction};
use super::{AlmostPeriodicDescriptor, Certificate, Decision, ShiftSpec, Verdict};
use crate::diagop::{Letter, Word};
use crate::epseq::EpSeq;
use crate::scalar::Rational;
use crate::wordsolver;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplayError(pub &'static str);

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

fn ensure(cond: bool, msg: &'static str) -> Result<(), ReplayError> {
    if cond {
        Ok(())
    } else {
        Err(ReplayError(msg))
    }
}

fn mag(w: &EpSeq, j: usize) -> &Rational {
    w.term(j).mag2()
}

/// Last index worth scanning: past it the weights only repeat.
fn horizon(w: &EpSeq) -> usize {
    w.span() + w.period()
}

fn check_leading_zeros(w: &EpSeq, k: usize) -> Result<(), ReplayError> {
    ensure((1..=k).all(|j| w.term(j).is_zero()), "claimed leading zeros are not zero")?;
    ensure(
        (k + 1..=horizon(w).max(k + 1) + w.period()).all(|j| !w.term(j).is_zero()),
        "zero weight after the leading zeros",
    )
}

fn product(w: &EpSeq, from: usize, len: usize) -> Rational {
    (from..from + len).fold(Rational::one(), |acc, j| acc * mag(w, j))
}

fn check_decisions(v: &Verdict, si: Decision, simple: Decision) -> Result<(), ReplayError> {
    ensure(v.si == si, "si verdict does not follow from the certificate")?;
    ensure(v.simple == simple, "simplicity verdict does not follow from the certificate")
}

/// Replays a verdict produced for `s`.
pub fn replay(s: &ShiftSpec, v: &Verdict) -> Result<(), ReplayError> {
    let w = s.weights();
    ensure(v.simple != Decision::Yes || v.si == Decision::Yes, "simple without si")?;
    match &v.certificate {
        Certificate::ZeroGap { index, partial_isometry, ideal_generator } => {
            let i = *index;
            let gap = |j: usize| !w.term(j).is_zero() && w.term(j + 1).is_zero();
            ensure(i >= 1 && gap(i), "no zero gap at the claimed index")?;
            ensure(!(1..i).any(gap), "an earlier zero gap exists")?;
            let pi = (1..=horizon(w)).all(|j| mag(w, j).is_zero() || mag(w, j).is_one());
            ensure(pi == *partial_isometry, "partial-isometry flag is wrong")?;
            ensure(*ideal_generator == Word::power(Letter::Gen, i + 1), "ideal generator is not T^(i+1)")?;
            check_decisions(v, Decision::from_bool(pi), Decision::No)
        }
        Certificate::Periodic { leading_zeros, period, cycle_product, witness } => {
            let (k, p) = (*leading_zeros, *period);
            check_leading_zeros(w, k)?;
            ensure(p >= 1, "period must be positive")?;
            let upto = horizon(w).max(k + 1) + p.lcm(&w.period());
            ensure((k + 1..=upto).all(|j| mag(w, j) == mag(w, j + p)), "moduli are not periodic after the leading zeros")?;
            ensure(product(w, k + 1, p) == *cycle_product, "cycle product is wrong")?;
            let yes = cycle_product.is_one();
            check_decisions(v, Decision::from_bool(yes), Decision::from_bool(yes))?;
            if yes {
                let wp = witness.as_ref().ok_or(ReplayError("SI verdict without a word witness"))?;
                ensure(wp.generator == Word::gen(), "witness generator is not T")?;
                ensure(wordsolver::is_adjoint_witness(w, wp), "word witness does not satisfy T* = X T Y")?;
            }
            Ok(())
        }
        Certificate::EventuallyConstant { leading_zeros, prefix_len, limit } => {
            let (k, n) = (*leading_zeros, *prefix_len);
            check_leading_zeros(w, k)?;
            let from = k + n + 1;
            ensure((from..=horizon(w).max(from) + w.period()).all(|j| mag(w, j) == limit), "moduli are not constant after the prefix")?;
            ensure(n == 0 || mag(w, k + n) != limit, "prefix is not minimal")?;
            let yes = limit.is_one() && n <= 1;
            check_decisions(v, Decision::from_bool(yes), Decision::from_bool(yes))
        }
        Certificate::QuasiIsometry => {
            let ok = (1..=horizon(w)).all(|j| w.term(j).is_zero() || mag(w, j + 1).is_one());
            ensure(ok, "(T*T)T = T fails")?;
            check_decisions(v, Decision::Yes, Decision::Yes)
        }
        Certificate::PowerPartialIsometry => {
            ensure((1..=horizon(w)).all(|j| w.term(j).is_partial_unit()), "a weight has modulus outside {0, 1}")?;
            ensure(v.si == Decision::Yes, "power partial isometries are SI")
        }
        Certificate::MeanNotOne { period, cycle_product } => {
            let p = *period;
            let from = w.span() + 1;
            ensure(p >= 1, "period must be positive")?;
            ensure((from..from + p.lcm(&w.period())).all(|j| mag(w, j) == mag(w, j + p)), "moduli are not eventually periodic with that period")?;
            ensure(product(w, from, p) == *cycle_product, "cycle product is wrong")?;
            ensure(!cycle_product.is_zero() && !cycle_product.is_one(), "cycle product is 0 or 1")?;
            ensure(v.si == Decision::No, "mean outside {0, 1} rules out SI")
        }
        Certificate::ReciprocalFailure { leading_zeros, index, reason } => {
            let (k, i) = (*leading_zeros, *index);
            check_leading_zeros(w, k)?;
            ensure(i >= 2, "reciprocal condition starts at index 2")?;
            let rest = w.shift_left(k);
            let target = mag(&rest, i).recip();
            let last = i.max(rest.preperiod() + 1) + rest.period() - 1;
            let mut factors: alloc::vec::Vec<Rational> = (i..=last).map(|j| mag(&rest, j).clone()).collect();
            factors.sort();
            factors.dedup();
            match reason {
                MagObstruction::Magnitude => {
                    let one = Rational::one();
                    let ok = if target > one {
                        factors.iter().all(|f| *f <= one)
                    } else if target < one {
                        factors.iter().all(|f| *f >= one)
                    } else {
                        factors.iter().all(|f| *f > one) || factors.iter().all(|f| *f < one)
                    };
                    ensure(ok, "later moduli do not all lie on the wrong side of 1")?;
                }
                other => ensure(
                    reciprocal::mag_obstruction(&target, &factors).as_ref() == Some(other),
                    "modulus obstruction does not reproduce",
                )?,
            }
            check_decisions(v, Decision::No, Decision::No)
        }
        Certificate::Band(_) => Err(ReplayError("band certificates need a descriptor")),
        Certificate::Undecided { .. } => check_decisions(v, Decision::Unknown, Decision::Unknown),
    }
}

/// Replays a verdict produced for an almost periodic descriptor.
pub fn replay_almost_periodic(d: &AlmostPeriodicDescriptor, v: &Verdict) -> Result<(), ReplayError> {
    let c = d.limit_cycle();
    match &v.certificate {
        Certificate::MeanNotOne { period, cycle_product } => {
            ensure(*period == c.period(), "period differs from the limit cycle")?;
            ensure(product(c, 1, c.period()) == *cycle_product, "cycle product is wrong")?;
            ensure(!cycle_product.is_zero() && !cycle_product.is_one(), "cycle product is 0 or 1")?;
            check_decisions(v, Decision::No, Decision::No)
        }
        Certificate::Band(b) => {
            ensure(d.band() == Some(*b), "band not asserted by the descriptor")?;
            check_decisions(v, Decision::No, Decision::No)
        }
        Certificate::Undecided { .. } => check_decisions(v, Decision::Unknown, Decision::Unknown),
        _ => Err(ReplayError("certificate does not apply to descriptors")),
    }
}
