//! SI and simplicity of `S(T, T*)` for weighted shifts with eventually
//! periodic weights.
//!
//! [`si_decide`] applies, in order: the zero-gap rule, the periodic-modulus
//! rule, the eventually-constant rule, the quasi-isometry and power-partial-isometry criteria, and finally the
//! necessary conditions (periodic mean and reciprocal condition). Each
//! decisive verdict carries a [`Certificate`] that [`replay`] can re-check
//! from the weights alone.

pub mod reciprocal;
pub mod replay;

use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::diagop::{op_equal, DiagError, Letter, ShiftPair, Word};
use crate::epseq::EpSeq;
use crate::scalar::Rational;
use crate::wordsolver::{self, SearchOutcome, WitnessPair};

pub use reciprocal::{MagObstruction, ReciprocalFactor, ReciprocalOutcome};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShiftError {
    AllZeroWeights,
    /// The limit cycle of a descriptor has a prefix.
    NotPurelyPeriodic,
    /// Band start below 2.
    BadBandIndex(usize),
}

impl fmt::Display for ShiftError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftError::AllZeroWeights => f.write_str("weight sequence is identically zero"),
            ShiftError::NotPurelyPeriodic => f.write_str("limit cycle must be purely periodic"),
            ShiftError::BadBandIndex(i) => write!(f, "band must start at index 2 or later, got {i}"),
        }
    }
}

impl From<DiagError> for ShiftError {
    fn from(_: DiagError) -> Self {
        ShiftError::AllZeroWeights
    }
}

/// Weighted shift `T e_n = a_n e_{n+1}` with eventually periodic weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftSpec {
    weights: EpSeq,
}

impl ShiftSpec {
    pub fn new(weights: EpSeq) -> Result<Self, ShiftError> {
        if weights.is_all_zero() {
            return Err(ShiftError::AllZeroWeights);
        }
        Ok(ShiftSpec { weights })
    }

    pub fn weights(&self) -> &EpSeq {
        &self.weights
    }

    /// Number of leading zero weights.
    pub fn leading_zeros(&self) -> usize {
        self.weights.first_nonzero().expect("not identically zero") - 1
    }

    /// The weights after the leading zeros.
    pub fn rest(&self) -> EpSeq {
        self.weights.shift_left(self.leading_zeros())
    }

    /// The same spec with every phase dropped.
    pub fn moduli(&self) -> ShiftSpec {
        ShiftSpec { weights: self.weights.mag2_seq() }
    }
}

/// Moduli eventually strictly below or above 1, from a given index on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    AllBelowOne(usize),
    AllAboveOne(usize),
}

impl Band {
    pub fn start(&self) -> usize {
        match *self {
            Band::AllBelowOne(i) | Band::AllAboveOne(i) => i,
        }
    }
}

/// Weights whose moduli approach a periodic sequence `c_n`, given by the
/// scalars of `limit_cycle` (only their moduli matter).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlmostPeriodicDescriptor {
    limit_cycle: EpSeq,
    band: Option<Band>,
}

impl AlmostPeriodicDescriptor {
    pub fn new(limit_cycle: EpSeq, band: Option<Band>) -> Result<Self, ShiftError> {
        if !limit_cycle.is_purely_periodic() {
            return Err(ShiftError::NotPurelyPeriodic);
        }
        if let Some(b) = band {
            if b.start() < 2 {
                return Err(ShiftError::BadBandIndex(b.start()));
            }
        }
        Ok(AlmostPeriodicDescriptor { limit_cycle, band })
    }

    pub fn limit_cycle(&self) -> &EpSeq {
        &self.limit_cycle
    }

    pub fn band(&self) -> Option<Band> {
        self.band
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

impl Decision {
    pub fn from_bool(b: bool) -> Decision {
        if b {
            Decision::Yes
        } else {
            Decision::No
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Decision::Yes => "yes",
            Decision::No => "no",
            Decision::Unknown => "unknown",
        }
    }
}

/// Why a verdict holds. Indices inside `rest` count from the first nonzero
/// weight, which is index 1 of `rest`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    ZeroGap {
        index: usize,
        partial_isometry: bool,
        ideal_generator: Word,
    },
    Periodic {
        leading_zeros: usize,
        period: usize,
        cycle_product: Rational,
        witness: Option<WitnessPair>,
    },
    EventuallyConstant {
        leading_zeros: usize,
        prefix_len: usize,
        limit: Rational,
    },
    QuasiIsometry,
    PowerPartialIsometry,
    MeanNotOne {
        period: usize,
        cycle_product: Rational,
    },
    ReciprocalFailure {
        leading_zeros: usize,
        index: usize,
        reason: MagObstruction,
    },
    Band(Band),
    Undecided {
        cycle_product: Rational,
        exp_bound: u32,
        index: Option<usize>,
    },
}

impl Certificate {
    pub fn citation(&self) -> &'static str {
        match self {
            Certificate::ZeroGap { .. } => "thm:zero-gap",
            Certificate::Periodic { .. } => "thm:periodic",
            Certificate::EventuallyConstant { .. } => "cor:eventually-constant",
            Certificate::QuasiIsometry => "prop:quasi-isometry",
            Certificate::PowerPartialIsometry => "cor:power-partial-isometry",
            Certificate::MeanNotOne { .. } => "thm:almost-periodic",
            Certificate::ReciprocalFailure { .. } | Certificate::Band(_) => "thm:reciprocal",
            Certificate::Undecided { .. } => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub si: Decision,
    pub simple: Decision,
    pub certificate: Certificate,
}

/// Search limits for [`si_decide`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Per-factor exponent bound for the reciprocal search.
    pub exp_bound: u32,
    /// Total word degree for witness searches; `2p + 2` when absent.
    pub max_word_len: Option<usize>,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { exp_bound: 4, max_word_len: None }
    }
}

/// Least `i` with `a_i != 0` and `a_{i+1} = 0`.
pub fn zero_gap(s: &ShiftSpec) -> Option<usize> {
    let w = s.weights();
    (1..=w.span() + 1).find(|&i| !w.term(i).is_zero() && w.term(i + 1).is_zero())
}

/// Every weight has modulus 0 or 1.
pub fn is_power_partial_isometry(s: &ShiftSpec) -> bool {
    s.weights().is_partial_unit()
}

/// `(T*T)T = T`.
pub fn is_quasi_isometry_contraction(s: &ShiftSpec) -> bool {
    let pair = ShiftPair::new(s.weights()).expect("spec weights are nonzero");
    let w = Word::new(alloc::vec![Letter::Adj, Letter::Gen, Letter::Gen]).unwrap();
    op_equal(&pair.eval(&w), &pair.gen)
}

/// The self-commutator `diag(|a_n|^2 - |a_{n-1}|^2)` is compact exactly when
/// the moduli are eventually constant.
pub fn is_essentially_normal_shift(s: &ShiftSpec) -> bool {
    s.weights().mag2_seq().period() == 1
}

pub fn reciprocal_condition(s: &ShiftSpec, exp_bound: u32) -> Result<ReciprocalOutcome, reciprocal::ReciprocalError> {
    reciprocal::reciprocal_condition(s.weights(), exp_bound)
}

/// Decides what it can; see the module docs for the order of rules.
pub fn si_decide(s: &ShiftSpec, bounds: &Bounds) -> Verdict {
    if let Some(index) = zero_gap(s) {
        let partial_isometry = is_power_partial_isometry(s);
        return Verdict {
            si: Decision::from_bool(partial_isometry),
            simple: Decision::No,
            certificate: Certificate::ZeroGap {
                index,
                partial_isometry,
                ideal_generator: Word::power(Letter::Gen, index + 1),
            },
        };
    }

    let leading_zeros = s.leading_zeros();
    let rest = s.rest();
    let mags = rest.mag2_seq();
    let cycle_product = mags.cycle_product_mag2();

    if mags.is_purely_periodic() {
        let period = mags.period();
        let yes = cycle_product.is_one();
        let witness = if yes {
            let bound = bounds.max_word_len.unwrap_or(2 * period + 2);
            match wordsolver::solve(s.weights(), &Word::gen(), bound) {
                Ok(SearchOutcome::Found(w)) => Some(w),
                _ => None,
            }
        } else {
            None
        };
        let d = Decision::from_bool(yes);
        return Verdict {
            si: d,
            simple: d,
            certificate: Certificate::Periodic { leading_zeros, period, cycle_product, witness },
        };
    }

    if let Some(limit) = mags.limit() {
        let prefix_len = mags.preperiod();
        let yes = limit.mag2().is_one() && prefix_len <= 1;
        let d = Decision::from_bool(yes);
        return Verdict {
            si: d,
            simple: d,
            certificate: Certificate::EventuallyConstant { leading_zeros, prefix_len, limit: limit.mag2().clone() },
        };
    }

    if is_quasi_isometry_contraction(s) {
        return Verdict { si: Decision::Yes, simple: Decision::Yes, certificate: Certificate::QuasiIsometry };
    }
    if is_power_partial_isometry(s) {
        return Verdict { si: Decision::Yes, simple: Decision::Unknown, certificate: Certificate::PowerPartialIsometry };
    }

    if !cycle_product.is_one() {
        return Verdict {
            si: Decision::No,
            simple: Decision::No,
            certificate: Certificate::MeanNotOne { period: mags.period(), cycle_product },
        };
    }

    let outcome = reciprocal::reciprocal_condition(&rest, bounds.exp_bound).expect("rest has no zero weights");
    match outcome {
        ReciprocalOutcome::FailsDefinitely { index, reason } => Verdict {
            si: Decision::No,
            simple: Decision::No,
            certificate: Certificate::ReciprocalFailure { leading_zeros, index, reason },
        },
        ReciprocalOutcome::Inconclusive { index, .. } => Verdict {
            si: Decision::Unknown,
            simple: Decision::Unknown,
            certificate: Certificate::Undecided { cycle_product, exp_bound: bounds.exp_bound, index: Some(index) },
        },
        ReciprocalOutcome::HoldsWitnessed(_) => Verdict {
            si: Decision::Unknown,
            simple: Decision::Unknown,
            certificate: Certificate::Undecided { cycle_product, exp_bound: bounds.exp_bound, index: None },
        },
    }
}

/// Necessary conditions for almost periodic moduli.
pub fn si_decide_almost_periodic(d: &AlmostPeriodicDescriptor) -> Verdict {
    let cycle_product = d.limit_cycle.cycle_product_mag2();
    if !cycle_product.is_zero() && !cycle_product.is_one() {
        return Verdict {
            si: Decision::No,
            simple: Decision::No,
            certificate: Certificate::MeanNotOne { period: d.limit_cycle.period(), cycle_product },
        };
    }
    if let Some(band) = d.band {
        return Verdict { si: Decision::No, simple: Decision::No, certificate: Certificate::Band(band) };
    }
    Verdict {
        si: Decision::Unknown,
        simple: Decision::Unknown,
        certificate: Certificate::Undecided { cycle_product, exp_bound: 0, index: None },
    }
}

/// `q^(2p)` for the periodic mean `q`, with the period `p` it refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumDescriptor {
    pub radius_2p: Rational,
    pub period: usize,
    /// `q` itself when `q^(2p)` has a rational `2p`-th root.
    pub radius: Option<Rational>,
    /// Set when the semigroup is known to be SI: then `q` is 0 or 1.
    pub si_annotation: bool,
}

pub const SI_SPECTRUM_NOTE: &str = "SI implies q in {0, 1}, so the spectrum is {0} or the closed unit disk";

fn exact_root(r: &Rational, n: u32) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let root = |x: &BigInt| {
        let c = x.nth_root(n);
        (num_traits::pow(c.clone(), n as usize) == *x).then_some(c)
    };
    Some(Rational::new(root(r.numer())?, root(r.denom())?))
}

fn descriptor_from(mags: &EpSeq, si_annotation: bool) -> SpectrumDescriptor {
    let radius_2p = mags.cycle_product_mag2();
    let period = mags.period();
    let radius = exact_root(&radius_2p, 2 * period as u32);
    SpectrumDescriptor { radius_2p, period, radius, si_annotation }
}

/// The spectrum is the closed disk of radius `q`.
pub fn spectrum_descriptor(s: &ShiftSpec, bounds: &Bounds) -> SpectrumDescriptor {
    spectrum_descriptor_with(s, si_decide(s, bounds).si == Decision::Yes)
}

/// As [`spectrum_descriptor`], for callers that already hold the verdict.
pub fn spectrum_descriptor_with(s: &ShiftSpec, si_annotation: bool) -> SpectrumDescriptor {
    descriptor_from(&s.weights().mag2_seq(), si_annotation)
}

pub fn spectrum_descriptor_almost_periodic(d: &AlmostPeriodicDescriptor) -> SpectrumDescriptor {
    descriptor_from(&d.limit_cycle.mag2_seq(), false)
}

/// Cycle product of the moduli after the leading zeros, for callers that
/// want the periodic mean without a verdict.
pub fn rest_cycle_product(s: &ShiftSpec) -> Rational {
    s.rest().mag2_seq().cycle_product_mag2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational, MultScalar};
    use alloc::vec;
    use alloc::vec::Vec;

    fn m(n: i64, d: i64) -> MultScalar {
        MultScalar::q(n, d, 0, 1)
    }

    fn spec(prefix: Vec<MultScalar>, cycle: Vec<MultScalar>) -> ShiftSpec {
        ShiftSpec::new(EpSeq::new(prefix, cycle).unwrap()).unwrap()
    }

    fn decide(s: &ShiftSpec) -> Verdict {
        si_decide(s, &Bounds::default())
    }

    #[test]
    fn zero_gap_examples() {
        assert_eq!(zero_gap(&spec(vec![m(1, 1), m(0, 1)], vec![m(1, 1)])), Some(1));
        assert_eq!(zero_gap(&spec(vec![m(0, 1), m(0, 1), m(2, 1)], vec![m(1, 1)])), None);
        assert_eq!(zero_gap(&spec(vec![], vec![m(1, 1), m(0, 1)])), Some(1));
        assert_eq!(zero_gap(&spec(vec![m(3, 1)], vec![m(2, 1), m(2, 1), m(0, 1)])), Some(3));
    }

    #[test]
    fn partial_isometry_examples() {
        assert!(is_power_partial_isometry(&spec(vec![], vec![m(1, 1)])));
        assert!(is_power_partial_isometry(&spec(vec![], vec![m(1, 1), m(0, 1)])));
        assert!(!is_power_partial_isometry(&spec(vec![], vec![m(4, 1), m(1, 2)])));
    }

    #[test]
    fn quasi_isometry_examples() {
        assert!(is_quasi_isometry_contraction(&spec(vec![m(4, 1)], vec![m(1, 1)])));
        assert!(is_quasi_isometry_contraction(&spec(vec![], vec![m(1, 1)])));
        assert!(!is_quasi_isometry_contraction(&spec(vec![], vec![m(4, 1), m(1, 2)])));
    }

    #[test]
    fn si_decide_examples() {
        let v = decide(&spec(vec![], vec![m(4, 1), m(1, 2)]));
        assert_eq!((v.si, v.simple), (Decision::No, Decision::No));
        assert!(matches!(&v.certificate, Certificate::Periodic { cycle_product, .. } if *cycle_product == int(2)));

        let v = decide(&spec(vec![m(4, 1)], vec![m(1, 1)]));
        assert_eq!((v.si, v.simple), (Decision::Yes, Decision::Yes));
        assert_eq!(v.certificate.citation(), "cor:eventually-constant");

        let v = decide(&spec(vec![m(1, 1), m(0, 1)], vec![m(1, 1)]));
        assert_eq!((v.si, v.simple), (Decision::Yes, Decision::No));
        assert!(matches!(&v.certificate, Certificate::ZeroGap { index: 1, ideal_generator, .. } if *ideal_generator == Word::power(Letter::Gen, 2)));

        let v = decide(&spec(vec![], vec![m(4, 1), m(1, 4)]));
        assert_eq!((v.si, v.simple), (Decision::Yes, Decision::Yes));
        let Certificate::Periodic { witness: Some(w), .. } = &v.certificate else { panic!() };
        assert!(w.checked);
    }

    #[test]
    fn gap_with_large_weight_is_not_si() {
        let v = decide(&spec(vec![m(2, 1), m(0, 1)], vec![m(1, 1)]));
        assert_eq!((v.si, v.simple), (Decision::No, Decision::No));
    }

    #[test]
    fn eventually_constant_rules() {
        // (a, 1, 1, ...) after leading zeros
        let v = decide(&spec(vec![m(0, 1), m(9, 1)], vec![m(1, 1)]));
        assert_eq!(v.si, Decision::Yes);
        // two weights before the constant tail
        let v = decide(&spec(vec![m(2, 1), m(3, 1)], vec![m(1, 1)]));
        assert_eq!(v.si, Decision::No);
        // limit not one
        let v = decide(&spec(vec![m(1, 1)], vec![m(1, 4)]));
        assert_eq!(v.si, Decision::No);
    }

    #[test]
    fn mixed_class_uses_necessary_conditions() {
        // moduli 2, then cycle (4, 1/4): product 1, reciprocal condition at
        // index 2 holds, so nothing decides.
        let v = decide(&spec(vec![m(2, 1)], vec![m(4, 1), m(1, 4)]));
        assert_eq!(v.si, Decision::Unknown);
        // 1/3 is needed at index 2 and no later modulus has a factor 1/3.
        let v = decide(&spec(vec![m(1, 1), m(3, 1)], vec![m(2, 1), m(1, 2)]));
        assert_eq!(v.si, Decision::No);
        assert!(matches!(v.certificate, Certificate::ReciprocalFailure { index: 2, .. }));
        // cycle (4, 1/2) after a prefix: mean not one.
        let v = decide(&spec(vec![m(5, 1)], vec![m(4, 1), m(1, 2)]));
        assert!(matches!(v.certificate, Certificate::MeanNotOne { .. }));
    }

    #[test]
    fn almost_periodic_examples() {
        let one = EpSeq::ones();
        let d = AlmostPeriodicDescriptor::new(one.clone(), Some(Band::AllBelowOne(2))).unwrap();
        assert_eq!(si_decide_almost_periodic(&d).si, Decision::No);
        let zero_one = EpSeq::periodic(vec![m(0, 1), m(1, 1)]).unwrap();
        let d = AlmostPeriodicDescriptor::new(zero_one, None).unwrap();
        assert_eq!(si_decide_almost_periodic(&d).si, Decision::Unknown);
        let d = AlmostPeriodicDescriptor::new(one, None).unwrap();
        assert_eq!(si_decide_almost_periodic(&d).si, Decision::Unknown);
        let d = AlmostPeriodicDescriptor::new(EpSeq::constant(m(1, 4)), None).unwrap();
        assert_eq!(si_decide_almost_periodic(&d).si, Decision::No);
        assert!(AlmostPeriodicDescriptor::new(EpSeq::new(vec![m(2, 1)], vec![m(1, 1)]).unwrap(), None).is_err());
        assert!(AlmostPeriodicDescriptor::new(EpSeq::ones(), Some(Band::AllAboveOne(1))).is_err());
    }

    #[test]
    fn spectrum_examples() {
        let b = Bounds::default();
        let d = spectrum_descriptor(&spec(vec![], vec![m(1, 1)]), &b);
        assert_eq!(d.radius, Some(int(1)));
        assert!(d.si_annotation);
        let d = spectrum_descriptor(&spec(vec![], vec![m(1, 4)]), &b);
        assert_eq!(d.radius, Some(rational(1, 2)));
        let d = spectrum_descriptor(&spec(vec![], vec![m(4, 1), m(1, 4)]), &b);
        assert_eq!(d.radius, Some(int(1)));
        let d = spectrum_descriptor(&spec(vec![], vec![m(4, 1), m(1, 2)]), &b);
        assert_eq!((d.radius_2p.clone(), d.radius), (int(2), None));
    }

    #[test]
    fn essential_normality_examples() {
        assert!(is_essentially_normal_shift(&spec(vec![m(4, 1)], vec![m(1, 1)])));
        assert!(!is_essentially_normal_shift(&spec(vec![], vec![m(4, 1), m(1, 4)])));
        assert!(is_essentially_normal_shift(&spec(vec![], vec![m(1, 1)])));
    }

    #[test]
    fn all_zero_is_rejected() {
        assert_eq!(ShiftSpec::new(EpSeq::zeros()), Err(ShiftError::AllZeroWeights));
    }
}
