//! Exact scalars.
//!
//! [`MultScalar`] is the multiplicative domain every weight computation lives
//! in: a complex number stored as its squared modulus and its argument in
//! turns, both rational. It is closed under multiplication and conjugation
//! only, which is all a product of weights and conjugated weights ever needs,
//! and it represents moduli such as `1/sqrt(2)` exactly through `mag2 = 1/2`.
//!
//! [`ComplexQ`] is an ordinary field element of `Q(i)` used for matrix entries.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

/// Errors raised when building scalars from raw parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalarError {
    NegativeMagnitude,
    PhaseOutOfRange,
    ZeroWithPhase,
}

impl fmt::Display for ScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarError::NegativeMagnitude => f.write_str("squared modulus must be nonnegative"),
            ScalarError::PhaseOutOfRange => f.write_str("phase must lie in [0, 1)"),
            ScalarError::ZeroWithPhase => f.write_str("zero scalar must have phase 0"),
        }
    }
}

/// Reduces a rational into `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Complex scalar `sqrt(mag2) * exp(2 pi i phase)` with rational `mag2 >= 0`
/// and rational `phase` in `[0, 1)`. Zero is unique: `(0, 0)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultScalar {
    mag2: Rational,
    phase: Rational,
}

impl MultScalar {
    /// Strict constructor: rejects a phase outside `[0, 1)` and a zero with a
    /// nonzero phase.
    pub fn new(mag2: Rational, phase: Rational) -> Result<Self, ScalarError> {
        if mag2.is_negative() {
            return Err(ScalarError::NegativeMagnitude);
        }
        if phase.is_negative() || phase >= Rational::one() {
            return Err(ScalarError::PhaseOutOfRange);
        }
        if mag2.is_zero() && !phase.is_zero() {
            return Err(ScalarError::ZeroWithPhase);
        }
        Ok(MultScalar { mag2, phase })
    }

    /// Lenient constructor: reduces the phase mod 1 and collapses zero.
    ///
    /// Panics if `mag2` is negative.
    pub fn from_parts(mag2: Rational, phase: Rational) -> Self {
        assert!(!mag2.is_negative(), "negative squared modulus");
        if mag2.is_zero() {
            return MultScalar::zero();
        }
        MultScalar { mag2, phase: frac(&phase) }
    }

    /// A nonnegative real scalar given by its square.
    pub fn real_sq(mag2: Rational) -> Self {
        MultScalar::from_parts(mag2, Rational::zero())
    }

    /// Small-integer shorthand, `mag2 = n/d` and phase `pn/pd`.
    pub fn q(n: i64, d: i64, pn: i64, pd: i64) -> Self {
        MultScalar::from_parts(rational(n, d), rational(pn, pd))
    }

    pub fn zero() -> Self {
        MultScalar { mag2: Rational::zero(), phase: Rational::zero() }
    }

    pub fn one() -> Self {
        MultScalar { mag2: Rational::one(), phase: Rational::zero() }
    }

    pub fn mag2(&self) -> &Rational {
        &self.mag2
    }

    pub fn phase(&self) -> &Rational {
        &self.phase
    }

    pub fn is_zero(&self) -> bool {
        self.mag2.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.mag2.is_one() && self.phase.is_zero()
    }

    /// `|a| = 1`.
    pub fn is_unimodular(&self) -> bool {
        self.mag2.is_one()
    }

    /// `|a| in {0, 1}`.
    pub fn is_partial_unit(&self) -> bool {
        self.mag2.is_zero() || self.mag2.is_one()
    }

    pub fn mul(&self, other: &MultScalar) -> MultScalar {
        if self.is_zero() || other.is_zero() {
            return MultScalar::zero();
        }
        MultScalar {
            mag2: &self.mag2 * &other.mag2,
            phase: frac(&(&self.phase + &other.phase)),
        }
    }

    pub fn conj(&self) -> MultScalar {
        if self.phase.is_zero() {
            return self.clone();
        }
        MultScalar { mag2: self.mag2.clone(), phase: Rational::one() - &self.phase }
    }

    /// `|a|`, i.e. the phase dropped.
    pub fn modulus(&self) -> MultScalar {
        MultScalar { mag2: self.mag2.clone(), phase: Rational::zero() }
    }

    /// `|a|^2 = a conj(a)`.
    pub fn abs_sq(&self) -> MultScalar {
        MultScalar { mag2: &self.mag2 * &self.mag2, phase: Rational::zero() }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<MultScalar> {
        if self.is_zero() {
            return None;
        }
        Some(MultScalar { mag2: self.mag2.recip(), phase: frac(&-&self.phase) })
    }

    pub fn pow(&self, e: u32) -> MultScalar {
        if e == 0 {
            return MultScalar::one();
        }
        if self.is_zero() {
            return MultScalar::zero();
        }
        MultScalar {
            mag2: num_traits::pow(self.mag2.clone(), e as usize),
            phase: frac(&(&self.phase * Rational::from_integer(BigInt::from(e)))),
        }
    }

    /// Multiplicative order of the phase (the least `n >= 1` with
    /// `n * phase` integral). Zero has order 1.
    pub fn phase_order(&self) -> BigInt {
        self.phase.denom().clone()
    }

    /// Floating-point embedding.
    pub fn to_complex(&self) -> Complex64 {
        let m = self.mag2.to_f64().unwrap_or(f64::NAN);
        let ph = self.phase.to_f64().unwrap_or(f64::NAN);
        Complex64::from_polar(libm_sqrt(m), 2.0 * core::f64::consts::PI * ph)
    }
}

fn libm_sqrt(x: f64) -> f64 {
    num_traits::Float::sqrt(x)
}

impl fmt::Debug for MultScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.mag2, self.phase)
    }
}

impl fmt::Display for MultScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase.is_zero() {
            write!(f, "sqrt({})", self.mag2)
        } else {
            write!(f, "sqrt({})*e(2pi i {})", self.mag2, self.phase)
        }
    }
}

/// Element of `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ComplexQ {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexQ {
    pub fn new(re: Rational, im: Rational) -> Self {
        ComplexQ { re, im }
    }

    pub fn real(re: Rational) -> Self {
        ComplexQ { re, im: Rational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        ComplexQ { re: int(re), im: int(im) }
    }

    pub fn zero() -> Self {
        ComplexQ::from_ints(0, 0)
    }

    pub fn one() -> Self {
        ComplexQ::from_ints(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ComplexQ { re: self.re.clone(), im: -&self.im }
    }

    /// `|z|^2`.
    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Debug for ComplexQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i", self.re, self.im)
    }
}

impl<'a> Add<&'a ComplexQ> for &'a ComplexQ {
    type Output = ComplexQ;
    fn add(self, rhs: &ComplexQ) -> ComplexQ {
        ComplexQ { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a ComplexQ> for &'a ComplexQ {
    type Output = ComplexQ;
    fn sub(self, rhs: &ComplexQ) -> ComplexQ {
        ComplexQ { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a ComplexQ> for &'a ComplexQ {
    type Output = ComplexQ;
    fn mul(self, rhs: &ComplexQ) -> ComplexQ {
        ComplexQ {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &ComplexQ {
    type Output = ComplexQ;
    fn neg(self) -> ComplexQ {
        ComplexQ { re: -&self.re, im: -&self.im }
    }
}

/// Least common multiple of two positive integers.
pub(crate) fn lcm_usize(a: usize, b: usize) -> usize {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64, d: i64, pn: i64, pd: i64) -> MultScalar {
        MultScalar::q(n, d, pn, pd)
    }

    #[test]
    fn mul_examples() {
        assert_eq!(s(4, 1, 0, 1).mul(&s(1, 2, 0, 1)), s(2, 1, 0, 1));
        assert_eq!(s(1, 1, 1, 4).mul(&s(1, 1, 3, 4)), s(1, 1, 0, 1));
        assert_eq!(MultScalar::zero().mul(&s(9, 1, 1, 3)), MultScalar::zero());
    }

    #[test]
    fn conj_examples() {
        assert_eq!(s(1, 1, 1, 4).conj(), s(1, 1, 3, 4));
        assert_eq!(MultScalar::zero().conj(), MultScalar::zero());
        assert_eq!(s(2, 1, 0, 1).conj(), s(2, 1, 0, 1));
    }

    #[test]
    fn unimodular_examples() {
        assert!(s(1, 1, 1, 3).is_unimodular());
        assert!(!s(1, 2, 0, 1).is_unimodular());
        assert!(!MultScalar::zero().is_unimodular());
    }

    #[test]
    fn strict_constructor_rejects_bad_parts() {
        assert_eq!(MultScalar::new(int(-1), int(0)), Err(ScalarError::NegativeMagnitude));
        assert_eq!(MultScalar::new(int(1), int(1)), Err(ScalarError::PhaseOutOfRange));
        assert_eq!(MultScalar::new(int(0), rational(1, 2)), Err(ScalarError::ZeroWithPhase));
        assert!(MultScalar::new(int(0), int(0)).unwrap().is_zero());
    }

    #[test]
    fn inverse_and_pow() {
        let a = s(4, 9, 1, 3);
        assert!(a.mul(&a.inv().unwrap()).is_one());
        assert_eq!(a.pow(3), a.mul(&a).mul(&a));
        assert_eq!(MultScalar::zero().inv(), None);
        assert_eq!(s(1, 1, 1, 6).phase_order(), BigInt::from(6));
    }

    #[test]
    fn complex_field_ops() {
        let a = ComplexQ::from_ints(1, 2);
        let b = ComplexQ::from_ints(3, -1);
        assert_eq!(&a * &b, ComplexQ::from_ints(5, 5));
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(a.conj(), ComplexQ::from_ints(1, -2));
        assert_eq!(a.norm_sq(), int(5));
    }
}
