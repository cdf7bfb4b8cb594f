//! Selfadjoint semigroups of functions on a finite set `{1, ..., n}`.
//!
//! Commuting normal operators reduce to such functions, and because the
//! semigroup is abelian a word is just an exponent vector over the generators
//! and their conjugates.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::scalar::{MultScalar, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FuncError {
    ZeroGenerator(usize),
    EmptyGenerators,
    SizeMismatch,
    /// Some value is neither zero nor a root of unity.
    NonTorsionValues,
    NotSimple,
}

impl fmt::Display for FuncError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuncError::ZeroGenerator(i) => write!(f, "generator {i} is identically zero"),
            FuncError::EmptyGenerators => f.write_str("no generators"),
            FuncError::SizeMismatch => f.write_str("generators live on spaces of different sizes"),
            FuncError::NonTorsionValues => f.write_str("values must be 0 or roots of unity"),
            FuncError::NotSimple => f.write_str("a projection witness needs a Simple verdict"),
        }
    }
}

/// A function on `{1, ..., n}` with values in the multiplicative scalars.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteFn {
    values: Vec<MultScalar>,
}

impl FiniteFn {
    pub fn new(values: Vec<MultScalar>) -> Self {
        FiniteFn { values }
    }

    /// Indicator of a set of one-indexed points.
    pub fn indicator(n: usize, points: &[usize]) -> Self {
        FiniteFn::new((1..=n).map(|x| if points.contains(&x) { MultScalar::one() } else { MultScalar::zero() }).collect())
    }

    /// `c · χ_points`.
    pub fn scaled_indicator(n: usize, points: &[usize], c: MultScalar) -> Self {
        FiniteFn::new((1..=n).map(|x| if points.contains(&x) { c.clone() } else { MultScalar::zero() }).collect())
    }

    pub fn space_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[MultScalar] {
        &self.values
    }

    /// Value at a one-indexed point.
    pub fn at(&self, x: usize) -> &MultScalar {
        &self.values[x - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(MultScalar::is_zero)
    }

    /// One-indexed points where the function is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.values.len()).filter(|&x| !self.at(x).is_zero()).collect()
    }

    pub fn mul(&self, other: &FiniteFn) -> FiniteFn {
        FiniteFn::new(self.values.iter().zip(&other.values).map(|(a, b)| a.mul(b)).collect())
    }

    pub fn conj(&self) -> FiniteFn {
        FiniteFn::new(self.values.iter().map(MultScalar::conj).collect())
    }

    pub fn pow(&self, e: u32) -> FiniteFn {
        FiniteFn::new(self.values.iter().map(|v| v.pow(e)).collect())
    }

    pub fn one(n: usize) -> FiniteFn {
        FiniteFn::new(alloc::vec![MultScalar::one(); n])
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }

    /// Every value is 0 or a root of unity.
    pub fn is_torsion(&self) -> bool {
        self.values.iter().all(MultScalar::is_partial_unit)
    }

    /// Least `k >= 1` with `v^k = 1` for every nonzero value `v`, assuming
    /// torsion values.
    pub fn torsion_order(&self) -> u32 {
        let mut l = BigInt::one();
        for v in self.values.iter().filter(|v| !v.is_zero()) {
            l = l.lcm(&v.phase_order());
        }
        l.to_u32().expect("root-of-unity order fits in u32")
    }
}

/// One entry of the conjugation-closed generator list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosedGen {
    pub origin: usize,
    pub conj: bool,
}

/// Generators together with their conjugates. A conjugate equal to its
/// origin is left out.
#[derive(Debug, Clone)]
pub struct ClosedSet {
    pub base: Vec<FiniteFn>,
    pub entries: Vec<ClosedGen>,
    pub funcs: Vec<FiniteFn>,
}

impl ClosedSet {
    pub fn new(base: &[FiniteFn]) -> Result<ClosedSet, FuncError> {
        let n = base.first().ok_or(FuncError::EmptyGenerators)?.space_size();
        let mut entries = Vec::new();
        let mut funcs = Vec::new();
        for (i, f) in base.iter().enumerate() {
            if f.space_size() != n {
                return Err(FuncError::SizeMismatch);
            }
            if f.is_zero() {
                return Err(FuncError::ZeroGenerator(i));
            }
            entries.push(ClosedGen { origin: i, conj: false });
            funcs.push(f.clone());
            let c = f.conj();
            if c != *f {
                entries.push(ClosedGen { origin: i, conj: true });
                funcs.push(c);
            }
        }
        Ok(ClosedSet { base: base.to_vec(), entries, funcs })
    }

    pub fn space_size(&self) -> usize {
        self.base[0].space_size()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The closed list is stable under conjugation.
    pub fn is_conj_closed(&self) -> bool {
        self.funcs.iter().all(|f| self.funcs.contains(&f.conj()))
    }

    pub fn eval(&self, w: &ExpWord) -> FiniteFn {
        w.exponents
            .iter()
            .zip(&self.funcs)
            .fold(FiniteFn::one(self.space_size()), |acc, (&e, f)| if e == 0 { acc } else { acc.mul(&f.pow(e)) })
    }

    /// Product of the base generators.
    pub fn base_product(&self) -> FiniteFn {
        self.base.iter().fold(FiniteFn::one(self.space_size()), |acc, f| acc.mul(f))
    }

    fn is_torsion(&self) -> bool {
        self.base.iter().all(FiniteFn::is_torsion)
    }
}

/// Exponent vector over a [`ClosedSet`]; all zeros is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExpWord {
    pub exponents: Vec<u32>,
}

impl ExpWord {
    pub fn identity(len: usize) -> Self {
        ExpWord { exponents: alloc::vec![0; len] }
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// No closed generator coming from base generator `origin` occurs.
    pub fn avoids(&self, set: &ClosedSet, origin: usize) -> bool {
        self.exponents.iter().zip(&set.entries).all(|(&e, g)| e == 0 || g.origin != origin)
    }
}

/// Exponent vectors with `exps[k] <= caps[k]`, by total degree, earlier
/// coordinates taking larger values first.
fn for_each_exponent(caps: &[u32], f: &mut impl FnMut(&[u32]) -> bool) -> bool {
    fn go(caps: &[u32], buf: &mut Vec<u32>, left: u32, f: &mut impl FnMut(&[u32]) -> bool) -> bool {
        let k = buf.len();
        if k == caps.len() {
            return left == 0 && f(buf);
        }
        let room: u32 = caps[k + 1..].iter().sum();
        let hi = left.min(caps[k]);
        let lo = left.saturating_sub(room);
        if lo > hi {
            return false;
        }
        for v in (lo..=hi).rev() {
            buf.push(v);
            if go(caps, buf, left - v, f) {
                return true;
            }
            buf.pop();
        }
        false
    }
    let total: u32 = caps.iter().sum();
    let mut buf = Vec::with_capacity(caps.len());
    (0..=total).any(|d| go(caps, &mut buf, d, f))
}

/// Finds the first exponent vector (in enumeration order) accepted by `pred`.
fn find_word(caps: &[u32], mut pred: impl FnMut(&ExpWord) -> bool) -> Option<ExpWord> {
    let mut found = None;
    for_each_exponent(caps, &mut |e| {
        let w = ExpWord { exponents: e.to_vec() };
        if pred(&w) {
            found = Some(w);
            true
        } else {
            false
        }
    });
    found
}

/// Exponent caps: the torsion order of each generator when values are roots
/// of unity (which makes the search complete), else the configured bound.
fn caps(set: &ClosedSet, exp_bound: u32, torsion: bool) -> Vec<u32> {
    set.funcs.iter().map(|f| if torsion { f.torsion_order() } else { exp_bound }).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotSimpleReason {
    /// Supports of two base generators differ.
    SupportMismatch { first: Vec<usize>, second: Vec<usize> },
    /// At this point no word can have the modulus needed.
    ModulusBlocked { point: usize },
    /// Exhaustive search over a finite group found nothing.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplicityVerdict {
    Simple(ExpWord),
    NotSimple(NotSimpleReason),
    Unknown(u32),
}

/// Simple iff all supports agree and `χ_S = (Π gens) · W` for some word `W`.
pub fn simplicity_check(gens: &[FiniteFn], exp_bound: u32) -> Result<SimplicityVerdict, FuncError> {
    let set = ClosedSet::new(gens)?;
    simplicity_on(&set, exp_bound)
}

fn simplicity_on(set: &ClosedSet, exp_bound: u32) -> Result<SimplicityVerdict, FuncError> {
    let s0 = set.base[0].support();
    for f in &set.base[1..] {
        let s = f.support();
        if s != s0 {
            return Ok(SimplicityVerdict::NotSimple(NotSimpleReason::SupportMismatch { first: s0, second: s }));
        }
    }
    let n = set.space_size();
    let chi = FiniteFn::indicator(n, &s0);
    let prod = set.base_product();
    let torsion = set.is_torsion();

    if !torsion {
        // |W(x)| must be 1/|prod(x)|; words only reach moduli on the side of 1
        // their generators lie on.
        for &x in &s0 {
            let target = prod.at(x).mag2().recip();
            let one = Rational::one();
            let mags: Vec<&Rational> = set.funcs.iter().map(|f| f.at(x).mag2()).collect();
            let blocked = (target > one && mags.iter().all(|m| **m <= one)) || (target < one && mags.iter().all(|m| **m >= one));
            if blocked {
                return Ok(SimplicityVerdict::NotSimple(NotSimpleReason::ModulusBlocked { point: x }));
            }
        }
    }

    let caps = caps(set, exp_bound, torsion);
    match find_word(&caps, |w| prod.mul(&set.eval(w)) == chi) {
        Some(w) => Ok(SimplicityVerdict::Simple(w)),
        None if torsion => Ok(SimplicityVerdict::NotSimple(NotSimpleReason::Exhausted)),
        None => Ok(SimplicityVerdict::Unknown(exp_bound)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoGenVerdict {
    SiNonsimple { w: ExpWord, w_prime: ExpWord },
    NotSi,
    Simple(ExpWord),
    Unknown(u32),
}

/// Two generators: SI and nonsimple iff `conj f = f W`, `conj g = g W'`
/// where `W` avoids `g` or `W'` avoids `f`.
pub fn nonsimple_si_two_gen(f: &FiniteFn, g: &FiniteFn, exp_bound: u32) -> Result<TwoGenVerdict, FuncError> {
    let set = ClosedSet::new(&[f.clone(), g.clone()])?;
    let simplicity = simplicity_on(&set, exp_bound)?;
    match simplicity {
        SimplicityVerdict::Simple(w) => return Ok(TwoGenVerdict::Simple(w)),
        SimplicityVerdict::Unknown(b) => return Ok(TwoGenVerdict::Unknown(b)),
        SimplicityVerdict::NotSimple(_) => {}
    }
    let torsion = set.is_torsion();
    let caps = caps(&set, exp_bound, torsion);
    let (fc, gc) = (f.conj(), g.conj());
    let solves_f = |w: &ExpWord| f.mul(&set.eval(w)) == fc;
    let solves_g = |w: &ExpWord| g.mul(&set.eval(w)) == gc;

    let w_gfree = find_word(&caps, |w| w.avoids(&set, 1) && solves_f(w));
    let w_any = w_gfree.clone().or_else(|| find_word(&caps, solves_f));
    let v_ffree = find_word(&caps, |w| w.avoids(&set, 0) && solves_g(w));
    let v_any = v_ffree.clone().or_else(|| find_word(&caps, solves_g));

    let pair = match (&w_gfree, &v_any, &w_any, &v_ffree) {
        (Some(w), Some(v), _, _) => Some((w.clone(), v.clone())),
        (_, _, Some(w), Some(v)) => Some((w.clone(), v.clone())),
        _ => None,
    };
    Ok(match pair {
        Some((w, w_prime)) => TwoGenVerdict::SiNonsimple { w, w_prime },
        None if torsion => TwoGenVerdict::NotSi,
        None => TwoGenVerdict::Unknown(exp_bound),
    })
}

/// `χ_S` and the word realizing it, checked to be a selfadjoint idempotent.
pub fn projection_witness(gens: &[FiniteFn], verdict: &SimplicityVerdict) -> Result<(FiniteFn, FiniteFn), FuncError> {
    let SimplicityVerdict::Simple(w) = verdict else {
        return Err(FuncError::NotSimple);
    };
    let set = ClosedSet::new(gens)?;
    let realized = set.base_product().mul(&set.eval(w));
    let chi = FiniteFn::indicator(set.space_size(), &gens[0].support());
    if realized != chi || !chi.is_idempotent() || chi.conj() != chi {
        return Err(FuncError::NotSimple);
    }
    Ok((chi, realized))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleVerdict {
    pub simple: bool,
    pub si: bool,
    /// Number of elements of the generated semigroup.
    pub size: usize,
}

/// Enumerates the whole (finite) semigroup and tests the definitions
/// directly. Values are encoded as `0` for zero and `k + 1` for
/// `exp(2 pi i k / L)`.
pub fn brute_force_oracle(gens: &[FiniteFn]) -> Result<OracleVerdict, FuncError> {
    let n = gens.first().ok_or(FuncError::EmptyGenerators)?.space_size();
    if gens.iter().any(|g| g.space_size() != n) {
        return Err(FuncError::SizeMismatch);
    }
    if !gens.iter().all(FiniteFn::is_torsion) {
        return Err(FuncError::NonTorsionValues);
    }
    let mut l = BigInt::one();
    for g in gens {
        for v in g.values() {
            l = l.lcm(v.phase().denom());
        }
    }
    let l = l.to_u32().ok_or(FuncError::NonTorsionValues)?;
    let encode = |v: &MultScalar| -> u32 {
        if v.is_zero() {
            0
        } else {
            (v.phase() * Rational::from_integer(l.into())).to_integer().to_u32().unwrap() + 1
        }
    };
    let mul = |a: &[u32], b: &[u32]| -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| if x == 0 || y == 0 { 0 } else { (x - 1 + y - 1) % l + 1 }).collect()
    };
    let conj = |a: &[u32]| -> Vec<u32> { a.iter().map(|&x| if x == 0 { 0 } else { (l - (x - 1)) % l + 1 }).collect() };

    let mut generators: Vec<Vec<u32>> = Vec::new();
    for g in gens {
        let e: Vec<u32> = g.values().iter().map(encode).collect();
        generators.push(conj(&e));
        generators.push(e);
    }
    generators.sort();
    generators.dedup();

    let mut elems: BTreeSet<Vec<u32>> = generators.iter().cloned().collect();
    let mut frontier: Vec<Vec<u32>> = elems.iter().cloned().collect();
    while let Some(a) = frontier.pop() {
        for g in &generators {
            let p = mul(&a, g);
            if elems.insert(p.clone()) {
                frontier.push(p);
            }
        }
    }
    let all: Vec<Vec<u32>> = elems.iter().cloned().collect();
    let ideal = |a: &Vec<u32>| -> BTreeSet<Vec<u32>> {
        let mut s: BTreeSet<Vec<u32>> = all.iter().map(|x| mul(a, x)).collect();
        s.insert(a.clone());
        s
    };
    let mut simple = true;
    let mut si = true;
    for a in &all {
        let id = ideal(a);
        if simple && !generators.iter().all(|g| id.contains(g)) {
            simple = false;
        }
        if si && !id.contains(&conj(a)) {
            si = false;
        }
    }
    Ok(OracleVerdict { simple, si, size: all.len() })
}
