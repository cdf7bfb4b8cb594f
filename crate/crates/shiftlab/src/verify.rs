//! `--verify-certificate`: re-checks a saved report against its embedded
//! input without trusting any of its conclusions.

use num_traits::One;
use shiftlab_core::funcsg::{brute_force_oracle, simplicity_check, ClosedSet, FiniteFn, SimplicityVerdict};
use shiftlab_core::matrixlab::{classify_idempotent, projection_report};
use shiftlab_core::shiftcheck::replay::{replay, replay_almost_periodic};
use shiftlab_core::shiftcheck::{
    is_essentially_normal_shift, spectrum_descriptor, spectrum_descriptor_almost_periodic, spectrum_descriptor_with,
    Certificate, Verdict,
};
use shiftlab_core::wordsolver::{self, is_adjoint_witness, WitnessPair};
use shiftlab_core::{Bounds, Decision};

use crate::commands::truncation_error;
use crate::commands::TruncationOpts;
use crate::error::{CliError, Result};
use crate::formats::{digest, parse_word, FuncsgFile, ShiftInput, ShiftModel};
use crate::report::{decision_from_name, exp_word, Body, MatrixDto, OracleDto, ReasonDto, Report, SimplicityDto, SpectrumDto, TwoGenDto, TOOL};

fn ensure(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Verify(msg.into()))
    }
}

pub fn verify_report(r: &Report) -> Result<()> {
    ensure(r.tool == TOOL, format!("not a {TOOL} report"))?;
    match &r.body {
        Body::ShiftAnalyze { input, bounds, analysis } => {
            check_digest(r, input)?;
            let v = Verdict {
                si: decision_from_name(&analysis.si)?,
                simple: decision_from_name(&analysis.simple)?,
                certificate: analysis.certificate.to_core()?,
            };
            ensure(analysis.citation == v.certificate.citation(), "citation does not match the certificate")?;
            if let Certificate::Undecided { exp_bound, .. } = &v.certificate {
                if !matches!(input.model()?, ShiftModel::AlmostPeriodic(_)) {
                    ensure(*exp_bound == bounds.exp_bound, "undecided verdict does not carry the bounds used")?;
                }
            }
            match input.model()? {
                ShiftModel::Weights(s) => {
                    replay(&s, &v).map_err(|e| CliError::Verify(e.to_string()))?;
                    ensure(analysis.essentially_normal == Some(is_essentially_normal_shift(&s)), "essential normality is wrong")?;
                    let d = spectrum_descriptor_with(&s, v.si == Decision::Yes);
                    ensure(analysis.spectrum == SpectrumDto::from_core(&d), "spectrum descriptor is wrong")
                }
                ShiftModel::AlmostPeriodic(d) => {
                    replay_almost_periodic(&d, &v).map_err(|e| CliError::Verify(e.to_string()))?;
                    ensure(analysis.essentially_normal.is_none(), "descriptors carry no essential-normality flag")?;
                    ensure(analysis.spectrum == SpectrumDto::from_core(&spectrum_descriptor_almost_periodic(&d)), "spectrum descriptor is wrong")
                }
            }
        }
        Body::ShiftSpectrum { input, bounds, spectrum } => {
            check_digest(r, input)?;
            let d = match input.model()? {
                ShiftModel::Weights(s) => {
                    spectrum_descriptor(&s, &Bounds { exp_bound: bounds.exp_bound, max_word_len: bounds.max_word_len })
                }
                ShiftModel::AlmostPeriodic(d) => spectrum_descriptor_almost_periodic(&d),
            };
            ensure(*spectrum == SpectrumDto::from_core(&d), "spectrum descriptor is wrong")
        }
        Body::Solve { input, target, bound, result } => {
            check_digest(r, input)?;
            let s = input.weights()?;
            let t = parse_word(target)?;
            if result.found {
                let factor = |f: &Option<String>| -> Result<Option<shiftlab_core::Word>> {
                    let f = f.as_deref().ok_or(CliError::Verify("found without a factor".into()))?;
                    wordsolver::parse_factor(f).map_err(|e| CliError::Parse(e.to_string()))
                };
                let w = WitnessPair { x: factor(&result.x)?, y: factor(&result.y)?, generator: t.clone(), goal: t.star(), checked: true };
                ensure(result.checked, "witness was not marked checked")?;
                ensure(result.total_degree == Some(w.total_degree()), "total degree is wrong")?;
                ensure(w.total_degree() + t.degree() <= *bound, "witness exceeds the bound")?;
                ensure(is_adjoint_witness(s.weights(), &w), "X T Y differs from T*")
            } else {
                let again = wordsolver::solve(s.weights(), &t, *bound).map_err(|e| CliError::Verify(e.to_string()))?;
                ensure(again.witness().is_none(), "a witness exists within the bound")
            }
        }
        Body::FuncsgSimple { input, exp_bound, result, .. } => {
            check_digest(r, input)?;
            check_simplicity(&input.to_core()?, *exp_bound, result)
        }
        Body::FuncsgSi2 { input, exp_bound, result, .. } => {
            check_digest(r, input)?;
            let gens = input.to_core()?;
            ensure(gens.len() == 2, "si2 reports have two generators")?;
            check_two_gen(&gens, *exp_bound, result)
        }
        Body::FuncsgOracle { input, result } => {
            check_digest(r, input)?;
            let o = brute_force_oracle(&input.to_core()?).map_err(|e| CliError::Verify(e.to_string()))?;
            ensure(*result == OracleDto::from_core(&o), "oracle result differs")
        }
        Body::MatrixIdempotent { input, result, .. } => {
            check_digest(r, input)?;
            let m = input.to_core()?;
            ensure(*result == MatrixDto::from_core(&classify_idempotent(&m), &projection_report(&m)), "classification differs")
        }
        Body::OracleTruncation { input, word, n, window, tolerance, result } => {
            check_digest(r, input)?;
            let e = truncation_error(input, word, &TruncationOpts { n: *n, window: *window, tolerance: *tolerance })?;
            ensure(e == result.max_error, "maximum error differs")?;
            ensure(result.pass == (e <= *tolerance), "pass flag is wrong")
        }
    }
}

trait Canonical: serde::Serialize + PartialEq + Sized {
    fn canonical_form(&self) -> Result<Self>;
}

impl Canonical for ShiftInput {
    fn canonical_form(&self) -> Result<Self> {
        self.canonical()
    }
}

impl Canonical for FuncsgFile {
    fn canonical_form(&self) -> Result<Self> {
        self.canonical()
    }
}

impl Canonical for crate::formats::MatrixFile {
    fn canonical_form(&self) -> Result<Self> {
        Ok(crate::formats::MatrixFile::from_core(&self.to_core()?))
    }
}

fn check_digest<T: Canonical>(r: &Report, input: &T) -> Result<()> {
    ensure(input.canonical_form()? == *input, "embedded input is not in canonical form")?;
    ensure(digest(input) == r.input_digest, "input digest mismatch")
}

fn support_indicator(gens: &[FiniteFn]) -> FiniteFn {
    FiniteFn::indicator(gens[0].space_size(), &gens[0].support())
}

fn check_word(gens: &[FiniteFn], word: &[u32]) -> Result<()> {
    let set = ClosedSet::new(gens).map_err(|e| CliError::Verify(e.to_string()))?;
    ensure(word.len() == set.len(), "word length differs from the closed generator count")?;
    ensure(gens.iter().all(|g| g.support() == gens[0].support()), "supports differ")?;
    ensure(set.base_product().mul(&set.eval(&exp_word(word))) == support_indicator(gens), "word does not reach the support indicator")
}

fn check_simplicity(gens: &[FiniteFn], exp_bound: u32, result: &SimplicityDto) -> Result<()> {
    let torsion = gens.iter().all(FiniteFn::is_torsion);
    match result {
        SimplicityDto::Simple { word } => check_word(gens, word),
        SimplicityDto::NotSimple { reason } => match reason {
            ReasonDto::SupportMismatch { first, second } => {
                ensure(*first == gens[0].support(), "first support is wrong")?;
                ensure(first != second && gens.iter().any(|g| g.support() == *second), "no generator has the second support")
            }
            ReasonDto::ModulusBlocked { point } => {
                let set = ClosedSet::new(gens).map_err(|e| CliError::Verify(e.to_string()))?;
                ensure(gens[0].support().contains(point), "blocked point outside the support")?;
                let target = set.base_product().at(*point).mag2().recip();
                let one = shiftlab_core::Rational::one();
                let mags: Vec<_> = set.funcs.iter().map(|f| f.at(*point).mag2().clone()).collect();
                let blocked = (target > one && mags.iter().all(|m| *m <= one)) || (target < one && mags.iter().all(|m| *m >= one));
                ensure(blocked, "modulus at the point is reachable")
            }
            ReasonDto::Exhausted => {
                ensure(torsion, "exhaustion only proves anything for finite semigroups")?;
                let o = brute_force_oracle(gens).map_err(|e| CliError::Verify(e.to_string()))?;
                ensure(!o.simple, "the semigroup is simple")
            }
        },
        SimplicityDto::Unknown { exp_bound: b } => {
            ensure(*b == exp_bound, "unknown verdict does not carry the bound used")?;
            ensure(!torsion, "finite semigroups are always decided")
        }
    }
}

fn check_two_gen(gens: &[FiniteFn], exp_bound: u32, result: &TwoGenDto) -> Result<()> {
    let torsion = gens.iter().all(FiniteFn::is_torsion);
    match result {
        TwoGenDto::SiNonsimple { w, w_prime } => {
            let set = ClosedSet::new(gens).map_err(|e| CliError::Verify(e.to_string()))?;
            ensure(w.len() == set.len() && w_prime.len() == set.len(), "word length differs from the closed generator count")?;
            let (f, g) = (&gens[0], &gens[1]);
            let (w, v) = (exp_word(w), exp_word(w_prime));
            ensure(f.mul(&set.eval(&w)) == f.conj(), "conj f differs from f W")?;
            ensure(g.mul(&set.eval(&v)) == g.conj(), "conj g differs from g W'")?;
            ensure(w.avoids(&set, 1) || v.avoids(&set, 0), "neither word avoids the other generator")?;
            let nonsimple = matches!(
                simplicity_check(gens, exp_bound).map_err(|e| CliError::Verify(e.to_string()))?,
                SimplicityVerdict::NotSimple(_)
            );
            ensure(nonsimple, "nonsimplicity does not reproduce")
        }
        TwoGenDto::NotSi => {
            ensure(torsion, "a negative SI answer needs a finite semigroup")?;
            let o = brute_force_oracle(gens).map_err(|e| CliError::Verify(e.to_string()))?;
            ensure(!o.si, "the semigroup is SI")
        }
        TwoGenDto::Simple { word } => check_word(gens, word),
        TwoGenDto::Unknown { exp_bound: b } => {
            ensure(*b == exp_bound, "unknown verdict does not carry the bound used")?;
            ensure(!torsion, "finite semigroups are always decided")
        }
    }
}
