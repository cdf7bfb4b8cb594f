//! The reciprocal condition: for a shift with all weights nonzero to generate
//! an SI semigroup, each `1/a_i` with `i >= 2` must be a nonempty product of
//! weights `a_j` and conjugates with `j >= i`.
//!
//! Moduli are handled exactly. Writing every squared modulus over a pairwise
//! coprime base turns the modulus equation into a linear system
//! `sum_v n_v val(m_v) = val(t)` in nonnegative integers `n_v`. Four tests
//! prove it unsolvable; anything else is searched with exponents bounded by
//! the configured limit, and phases are matched by a reachability table over
//! the residues mod the common phase denominator.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::epseq::EpSeq;
use crate::scalar::{MultScalar, Rational};

/// Reasons the modulus equation has no nonempty solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MagObstruction {
    /// All factors lie on the wrong side of 1 compared with the target.
    Magnitude,
    /// Some base element appears with the target's sign in no usable factor.
    Valuation { base: BigInt },
    /// The target's valuation vector is outside the rational span of the
    /// factors' vectors.
    Span,
    /// The factors' vectors are independent and the unique solution is not a
    /// nonzero vector of nonnegative integers.
    UniqueSolution,
}

impl MagObstruction {
    pub fn name(&self) -> &'static str {
        match self {
            MagObstruction::Magnitude => "magnitude",
            MagObstruction::Valuation { .. } => "valuation",
            MagObstruction::Span => "span",
            MagObstruction::UniqueSolution => "unique-solution",
        }
    }
}

impl fmt::Display for MagObstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MagObstruction::Magnitude => f.write_str("every later modulus lies on the wrong side of 1"),
            MagObstruction::Valuation { base } => write!(f, "no later modulus can supply the factor {base}"),
            MagObstruction::Span => f.write_str("target modulus outside the multiplicative span of later moduli"),
            MagObstruction::UniqueSolution => f.write_str("the only exponent solution is not a nonempty nonnegative integer vector"),
        }
    }
}

/// One factor `a_j` (or `conj a_j`) raised to `exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReciprocalFactor {
    pub index: usize,
    pub conj: bool,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexOutcome {
    Holds(Vec<ReciprocalFactor>),
    Fails(MagObstruction),
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReciprocalOutcome {
    /// Witnesses for every index that needs checking.
    HoldsWitnessed(Vec<(usize, Vec<ReciprocalFactor>)>),
    FailsDefinitely { index: usize, reason: MagObstruction },
    Inconclusive { exp_bound: u32, index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReciprocalError {
    /// Some weight is zero.
    NotApplicable,
}

impl fmt::Display for ReciprocalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("reciprocal condition needs all weights nonzero")
    }
}

/// Checks every `i` in `2..=span+1`; later indices repeat earlier ones.
pub fn reciprocal_condition(alpha: &EpSeq, exp_bound: u32) -> Result<ReciprocalOutcome, ReciprocalError> {
    if alpha.has_zero_term() {
        return Err(ReciprocalError::NotApplicable);
    }
    let mut witnesses = Vec::new();
    let mut inconclusive = None;
    for i in 2..=alpha.span() + 1 {
        match reciprocal_at(alpha, i, exp_bound) {
            IndexOutcome::Holds(w) => witnesses.push((i, w)),
            IndexOutcome::Fails(reason) => return Ok(ReciprocalOutcome::FailsDefinitely { index: i, reason }),
            IndexOutcome::Inconclusive => {
                inconclusive.get_or_insert(i);
            }
        }
    }
    Ok(match inconclusive {
        Some(index) => ReciprocalOutcome::Inconclusive { exp_bound, index },
        None => ReciprocalOutcome::HoldsWitnessed(witnesses),
    })
}

/// Positions `j >= i` covering every value the tail takes.
pub(crate) fn tail_positions(alpha: &EpSeq, i: usize) -> core::ops::RangeInclusive<usize> {
    i..=i.max(alpha.preperiod() + 1) + alpha.period() - 1
}

/// Moduli of `1/a_i` and of the tail from `i`.
pub fn mag_problem(alpha: &EpSeq, i: usize) -> (Rational, Vec<Rational>) {
    let target = alpha.term(i).mag2().recip();
    let mut factors: Vec<Rational> = tail_positions(alpha, i).map(|j| alpha.term(j).mag2().clone()).collect();
    factors.sort();
    factors.dedup();
    (target, factors)
}

/// The reciprocal condition at a single index.
pub fn reciprocal_at(alpha: &EpSeq, i: usize, exp_bound: u32) -> IndexOutcome {
    let (target, classes) = mag_problem(alpha, i);
    let system = match MagSystem::build(&target, &classes) {
        Ok(s) => s,
        Err(reason) => return IndexOutcome::Fails(reason),
    };
    let solutions = match system.solutions(exp_bound) {
        Ok(s) => s,
        Err(reason) => return IndexOutcome::Fails(reason),
    };
    let target_phase = alpha.term(i).inv().expect("nonzero weight").phase().clone();
    let phases = PhaseTable::new(alpha, i, &classes, &target_phase);
    for counts in solutions {
        if let Some(picks) = phases.realize(&counts) {
            return IndexOutcome::Holds(picks);
        }
    }
    IndexOutcome::Inconclusive
}

/// Tests whether the modulus equation is provably unsolvable.
pub fn mag_obstruction(target: &Rational, classes: &[Rational]) -> Option<MagObstruction> {
    match MagSystem::build(target, classes) {
        Err(reason) => Some(reason),
        Ok(system) => system.obstruction(),
    }
}

/// Multiplies out a witness: `a_i · prod factors`, which must equal one.
pub fn witness_product(alpha: &EpSeq, i: usize, factors: &[ReciprocalFactor]) -> MultScalar {
    factors.iter().fold(alpha.term(i).clone(), |acc, f| {
        let v = if f.conj { alpha.term(f.index).conj() } else { alpha.term(f.index).clone() };
        acc.mul(&v.pow(f.exponent))
    })
}

/// Exact check of a witness as produced by [`reciprocal_at`].
pub fn check_witness(alpha: &EpSeq, i: usize, factors: &[ReciprocalFactor]) -> bool {
    !factors.is_empty()
        && factors.iter().all(|f| f.index >= i && f.exponent >= 1)
        && witness_product(alpha, i, factors).is_one()
}

fn sign_vs_one(r: &Rational) -> core::cmp::Ordering {
    r.cmp(&Rational::one())
}

/// Splits positive integers into a pairwise coprime base.
fn coprime_base(nums: impl IntoIterator<Item = BigInt>) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = nums.into_iter().filter(|n| *n > BigInt::one()).collect();
    base.sort();
    base.dedup();
    'outer: loop {
        for a in 0..base.len() {
            for b in a + 1..base.len() {
                let g = base[a].gcd(&base[b]);
                if g > BigInt::one() {
                    let (x, y) = (&base[a] / &g, &base[b] / &g);
                    base.swap_remove(b);
                    base.swap_remove(a);
                    base.extend([g, x, y].into_iter().filter(|n| *n > BigInt::one()));
                    base.sort();
                    base.dedup();
                    continue 'outer;
                }
            }
        }
        return base;
    }
}

fn valuation(mut n: BigInt, b: &BigInt) -> i64 {
    let mut v = 0;
    while (&n % b).is_zero() {
        n /= b;
        v += 1;
    }
    v
}

fn valuations(r: &Rational, base: &[BigInt]) -> Vec<i64> {
    base.iter().map(|b| valuation(r.numer().clone(), b) - valuation(r.denom().clone(), b)).collect()
}

/// The modulus equation after the sign and valuation tests.
struct MagSystem {
    /// Indices into the caller's class list that can still occur.
    active: Vec<usize>,
    n_classes: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
}

impl MagSystem {
    fn build(target: &Rational, classes: &[Rational]) -> Result<MagSystem, MagObstruction> {
        use core::cmp::Ordering::*;
        let side = sign_vs_one(target);
        let sides: Vec<_> = classes.iter().map(sign_vs_one).collect();
        let blocked = match side {
            Greater => sides.iter().all(|s| *s != Greater),
            Less => sides.iter().all(|s| *s != Less),
            Equal => sides.iter().all(|s| *s == Greater) || sides.iter().all(|s| *s == Less),
        };
        if blocked || classes.is_empty() {
            return Err(MagObstruction::Magnitude);
        }

        let base = coprime_base(
            core::iter::once(target)
                .chain(classes)
                .flat_map(|r| [r.numer().clone(), r.denom().clone()]),
        );
        let tv = valuations(target, &base);
        let cv: Vec<Vec<i64>> = classes.iter().map(|c| valuations(c, &base)).collect();

        let mut active: Vec<usize> = (0..classes.len()).collect();
        loop {
            let mut changed = false;
            for (bi, b) in base.iter().enumerate() {
                let t = tv[bi];
                let any_pos = active.iter().any(|&v| cv[v][bi] > 0);
                let any_neg = active.iter().any(|&v| cv[v][bi] < 0);
                if (t > 0 && !any_pos) || (t < 0 && !any_neg) {
                    return Err(MagObstruction::Valuation { base: b.clone() });
                }
                if t == 0 && any_pos != any_neg {
                    active.retain(|&v| cv[v][bi] == 0);
                    changed = true;
                }
            }
            if active.is_empty() {
                return Err(MagObstruction::Valuation { base: BigInt::one() });
            }
            if !changed {
                break;
            }
        }

        let rows = (0..base.len())
            .map(|bi| active.iter().map(|&v| Rational::from_integer(cv[v][bi].into())).collect())
            .collect();
        let rhs = tv.iter().map(|&t| Rational::from_integer(t.into())).collect();
        Ok(MagSystem { active, n_classes: classes.len(), rows, rhs })
    }

    fn reduce(&self) -> Result<(Rref, Vec<usize>), MagObstruction> {
        let ncols = self.active.len();
        let rref = Rref::new(self.rows.clone(), self.rhs.clone(), ncols);
        if !rref.consistent {
            return Err(MagObstruction::Span);
        }
        let free: Vec<usize> = (0..ncols).filter(|c| !rref.pivot_cols.contains(c)).collect();
        // A pivot row untouched by free columns fixes its variable outright.
        for r in 0..rref.pivot_cols.len() {
            let fixed = free.iter().all(|&c| rref.rows[r][c].is_zero());
            let v = &rref.rhs[r];
            if fixed && (!v.is_integer() || v.is_negative()) {
                return Err(MagObstruction::UniqueSolution);
            }
        }
        if free.is_empty() && rref.rhs.iter().all(Zero::is_zero) {
            // Only the empty product solves it.
            return Err(MagObstruction::UniqueSolution);
        }
        Ok((rref, free))
    }

    fn obstruction(&self) -> Option<MagObstruction> {
        self.reduce().err()
    }

    /// Solutions with free variables bounded by `exp_bound`, smallest free
    /// sum first, as exponent vectors over all classes.
    fn solutions(&self, exp_bound: u32) -> Result<Vec<Vec<u32>>, MagObstruction> {
        let (rref, free) = self.reduce()?;
        let mut out = Vec::new();
        let max_sum = exp_bound as usize * free.len();
        for sum in 0..=max_sum {
            for_each_composition(free.len(), sum, exp_bound, &mut |vals| {
                let x = rref.solve(&free, vals);
                if let Some(c) = to_counts(&x) {
                    if c.iter().any(|&n| n > 0) {
                        out.push(self.expand(&c));
                    }
                }
            });
        }
        Ok(out)
    }

    fn expand(&self, counts: &[u32]) -> Vec<u32> {
        let mut full = alloc::vec![0; self.n_classes];
        for (k, &v) in self.active.iter().enumerate() {
            full[v] = counts[k];
        }
        full
    }
}

fn to_counts(x: &[Rational]) -> Option<Vec<u32>> {
    x.iter()
        .map(|r| (r.is_integer() && !r.is_negative()).then(|| r.to_integer().to_u32()).flatten())
        .collect()
}

/// Calls `f` on every vector of `k` values in `0..=cap` summing to `sum`.
fn for_each_composition(k: usize, sum: usize, cap: u32, f: &mut impl FnMut(&[u32])) {
    fn go(buf: &mut Vec<u32>, k: usize, left: usize, cap: u32, f: &mut impl FnMut(&[u32])) {
        if k == 0 {
            if left == 0 {
                f(buf);
            }
            return;
        }
        if buf.len() == k - 1 {
            if left <= cap as usize {
                buf.push(left as u32);
                f(buf);
                buf.pop();
            }
            return;
        }
        for v in 0..=left.min(cap as usize) {
            buf.push(v as u32);
            go(buf, k, left - v, cap, f);
            buf.pop();
        }
    }
    go(&mut Vec::with_capacity(k), k, sum, cap, f);
}

/// Reduced row echelon form of `[A | b]` over the rationals.
struct Rref {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    pivot_cols: Vec<usize>,
    consistent: bool,
}

impl Rref {
    fn new(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>, ncols: usize) -> Rref {
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            rhs.swap(r, p);
            let inv = rows[r][c].recip();
            for v in rows[r].iter_mut() {
                *v *= &inv;
            }
            rhs[r] *= &inv;
            for i in 0..rows.len() {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    let pivot = rows[r].clone();
                    for (x, p) in rows[i].iter_mut().zip(&pivot) {
                        *x -= &f * p;
                    }
                    let d = &f * &rhs[r];
                    rhs[i] -= d;
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        let consistent = rhs[r..].iter().all(Zero::is_zero);
        rows.truncate(r);
        rhs.truncate(r);
        Rref { rows, rhs, pivot_cols, consistent }
    }

    /// Full solution for given values of the free columns.
    fn solve(&self, free: &[usize], vals: &[u32]) -> Vec<Rational> {
        let ncols = self.pivot_cols.len() + free.len();
        let mut x = alloc::vec![Rational::zero(); ncols];
        for (&c, &v) in free.iter().zip(vals) {
            x[c] = Rational::from_integer(v.into());
        }
        for (r, &pc) in self.pivot_cols.iter().enumerate() {
            let mut v = self.rhs[r].clone();
            for (&c, &fv) in free.iter().zip(vals) {
                v -= &self.rows[r][c] * Rational::from_integer(fv.into());
            }
            x[pc] = v;
        }
        x
    }
}

/// Phase options per modulus class, as residues mod a common denominator.
struct PhaseTable {
    modulus: usize,
    target: usize,
    /// For each class: (position, conjugated, residue), deduplicated by residue.
    options: Vec<Vec<(usize, bool, usize)>>,
}

impl PhaseTable {
    fn new(alpha: &EpSeq, i: usize, classes: &[Rational], target_phase: &Rational) -> PhaseTable {
        let mut modulus = target_phase.denom().clone();
        let positions: Vec<usize> = tail_positions(alpha, i).collect();
        for &j in &positions {
            modulus = modulus.lcm(alpha.term(j).phase().denom());
        }
        let modulus = modulus.to_usize().expect("phase denominators fit in usize");
        let residue = |r: &Rational| (r * Rational::from_integer(modulus.into())).to_integer().to_usize().unwrap() % modulus;
        let mut options: Vec<Vec<(usize, bool, usize)>> = alloc::vec![Vec::new(); classes.len()];
        for &j in &positions {
            let a = alpha.term(j);
            let class = classes.binary_search(a.mag2()).expect("class present");
            for (conj, v) in [(false, a.clone()), (true, a.conj())] {
                let r = residue(v.phase());
                if !options[class].iter().any(|o| o.2 == r) {
                    options[class].push((j, conj, r));
                }
            }
        }
        PhaseTable { modulus, target: residue(target_phase), options }
    }

    /// Picks `counts[v]` factors from each class with phases summing to the
    /// target, if possible.
    fn realize(&self, counts: &[u32]) -> Option<Vec<ReciprocalFactor>> {
        let l = self.modulus;
        let picks: Vec<usize> = counts.iter().enumerate().flat_map(|(v, &n)| core::iter::repeat_n(v, n as usize)).collect();
        // layers[s][r] = option index used to reach residue r after s picks.
        let mut layers: Vec<Vec<Option<(usize, usize)>>> = Vec::with_capacity(picks.len());
        let mut reach: BTreeSet<usize> = BTreeSet::new();
        reach.insert(0);
        for &class in &picks {
            let mut layer = alloc::vec![None; l];
            let mut next = BTreeSet::new();
            for &r in &reach {
                for (oi, o) in self.options[class].iter().enumerate() {
                    let nr = (r + o.2) % l;
                    if layer[nr].is_none() {
                        layer[nr] = Some((r, oi));
                        next.insert(nr);
                    }
                }
            }
            layers.push(layer);
            reach = next;
        }
        if !reach.contains(&self.target) {
            return None;
        }
        let mut r = self.target;
        let mut chosen: Vec<(usize, bool)> = Vec::with_capacity(picks.len());
        for (s, &class) in picks.iter().enumerate().rev() {
            let (prev, oi) = layers[s][r].expect("reachable residue has a parent");
            let o = self.options[class][oi];
            chosen.push((o.0, o.1));
            r = prev;
        }
        chosen.sort();
        let mut out: Vec<ReciprocalFactor> = Vec::new();
        for (index, conj) in chosen {
            match out.last_mut() {
                Some(f) if f.index == index && f.conj == conj => f.exponent += 1,
                _ => out.push(ReciprocalFactor { index, conj, exponent: 1 }),
            }
        }
        Some(out)
    }
}
