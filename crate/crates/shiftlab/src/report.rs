//! Report records. Every field is deterministic: the same input and flags
//! always serialize to the same bytes, so no timing is recorded.

use serde::{Deserialize, Serialize};
use shiftlab_core::funcsg::{ExpWord, NotSimpleReason, OracleVerdict, SimplicityVerdict, TwoGenVerdict};
use shiftlab_core::matrixlab::{IdempotentClass, ProjectionReport};
use shiftlab_core::shiftcheck::{Certificate, MagObstruction, SpectrumDescriptor, SI_SPECTRUM_NOTE};
use shiftlab_core::wordsolver::{parse_factor, show_factor, SearchOutcome, WitnessPair};
use shiftlab_core::Decision;

use crate::error::{CliError, Result};
use crate::formats::{parse_rational, parse_word, show_rational, BandDto, FuncsgFile, MatrixFile, ShiftInput};

pub const TOOL: &str = "shiftlab";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    /// SHA-256 of the canonical `input` field.
    pub input_digest: String,
    #[serde(flatten)]
    pub body: Body,
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Body {
    ShiftAnalyze { input: ShiftInput, bounds: BoundsDto, analysis: AnalysisDto },
    ShiftSpectrum { input: ShiftInput, bounds: BoundsDto, spectrum: SpectrumDto },
    Solve { input: ShiftInput, target: String, bound: usize, result: SolveDto },
    FuncsgSimple { input: FuncsgFile, exp_bound: u32, citation: String, result: SimplicityDto },
    FuncsgSi2 { input: FuncsgFile, exp_bound: u32, citation: String, result: TwoGenDto },
    FuncsgOracle { input: FuncsgFile, result: OracleDto },
    MatrixIdempotent { input: MatrixFile, citation: String, result: MatrixDto },
    OracleTruncation { input: ShiftInput, word: String, n: usize, window: usize, tolerance: f64, result: TruncationDto },
}

impl Body {
    pub fn command(&self) -> &'static str {
        match self {
            Body::ShiftAnalyze { .. } => "shift-analyze",
            Body::ShiftSpectrum { .. } => "shift-spectrum",
            Body::Solve { .. } => "solve",
            Body::FuncsgSimple { .. } => "funcsg-simple",
            Body::FuncsgSi2 { .. } => "funcsg-si2",
            Body::FuncsgOracle { .. } => "funcsg-oracle",
            Body::MatrixIdempotent { .. } => "matrix-idempotent",
            Body::OracleTruncation { .. } => "oracle-truncation",
        }
    }

    /// The answer depends on a search bound that ran out.
    pub fn is_unknown(&self) -> bool {
        match self {
            Body::ShiftAnalyze { analysis, .. } => analysis.si == "unknown" || analysis.simple == "unknown",
            Body::Solve { result, .. } => !result.found,
            Body::FuncsgSimple { result, .. } => matches!(result, SimplicityDto::Unknown { .. }),
            Body::FuncsgSi2 { result, .. } => matches!(result, TwoGenDto::Unknown { .. }),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsDto {
    pub exp_bound: u32,
    /// `null` means the default `2p + 2`.
    pub max_word_len: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisDto {
    pub si: String,
    pub simple: String,
    pub citation: String,
    pub certificate: CertificateDto,
    /// `null` for almost periodic descriptors.
    pub essentially_normal: Option<bool>,
    pub spectrum: SpectrumDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDto {
    pub x: String,
    pub y: String,
    pub generator: String,
    pub goal: String,
    pub checked: bool,
}

impl WitnessDto {
    pub fn from_core(w: &WitnessPair) -> Self {
        WitnessDto {
            x: show_factor(&w.x),
            y: show_factor(&w.y),
            generator: w.generator.to_string(),
            goal: w.goal.to_string(),
            checked: w.checked,
        }
    }

    pub fn to_core(&self) -> Result<WitnessPair> {
        let factor = |s: &str| parse_factor(s).map_err(|e| CliError::Parse(format!("word {s:?}: {e}")));
        Ok(WitnessPair {
            x: factor(&self.x)?,
            y: factor(&self.y)?,
            generator: parse_word(&self.generator)?,
            goal: parse_word(&self.goal)?,
            checked: self.checked,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateDto {
    ZeroGap { index: usize, partial_isometry: bool, ideal_generator: String },
    Periodic { leading_zeros: usize, period: usize, cycle_product: String, witness: Option<WitnessDto> },
    EventuallyConstant { leading_zeros: usize, prefix_len: usize, limit: String },
    QuasiIsometry,
    PowerPartialIsometry,
    MeanNotOne { period: usize, cycle_product: String },
    ReciprocalFailure {
        leading_zeros: usize,
        index: usize,
        reason: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<String>,
        explanation: String,
    },
    Band { band: BandDto },
    Undecided { cycle_product: String, exp_bound: u32, index: Option<usize> },
}

impl CertificateDto {
    pub fn from_core(c: &Certificate) -> Self {
        match c {
            Certificate::ZeroGap { index, partial_isometry, ideal_generator } => CertificateDto::ZeroGap {
                index: *index,
                partial_isometry: *partial_isometry,
                ideal_generator: ideal_generator.to_string(),
            },
            Certificate::Periodic { leading_zeros, period, cycle_product, witness } => CertificateDto::Periodic {
                leading_zeros: *leading_zeros,
                period: *period,
                cycle_product: show_rational(cycle_product),
                witness: witness.as_ref().map(WitnessDto::from_core),
            },
            Certificate::EventuallyConstant { leading_zeros, prefix_len, limit } => CertificateDto::EventuallyConstant {
                leading_zeros: *leading_zeros,
                prefix_len: *prefix_len,
                limit: show_rational(limit),
            },
            Certificate::QuasiIsometry => CertificateDto::QuasiIsometry,
            Certificate::PowerPartialIsometry => CertificateDto::PowerPartialIsometry,
            Certificate::MeanNotOne { period, cycle_product } => {
                CertificateDto::MeanNotOne { period: *period, cycle_product: show_rational(cycle_product) }
            }
            Certificate::ReciprocalFailure { leading_zeros, index, reason } => CertificateDto::ReciprocalFailure {
                leading_zeros: *leading_zeros,
                index: *index,
                reason: reason.name().to_string(),
                base: match reason {
                    MagObstruction::Valuation { base } => Some(base.to_string()),
                    _ => None,
                },
                explanation: reason.to_string(),
            },
            Certificate::Band(b) => CertificateDto::Band { band: BandDto::from_core(*b) },
            Certificate::Undecided { cycle_product, exp_bound, index } => CertificateDto::Undecided {
                cycle_product: show_rational(cycle_product),
                exp_bound: *exp_bound,
                index: *index,
            },
        }
    }

    pub fn to_core(&self) -> Result<Certificate> {
        Ok(match self {
            CertificateDto::ZeroGap { index, partial_isometry, ideal_generator } => Certificate::ZeroGap {
                index: *index,
                partial_isometry: *partial_isometry,
                ideal_generator: parse_word(ideal_generator)?,
            },
            CertificateDto::Periodic { leading_zeros, period, cycle_product, witness } => Certificate::Periodic {
                leading_zeros: *leading_zeros,
                period: *period,
                cycle_product: parse_rational(cycle_product)?,
                witness: witness.as_ref().map(WitnessDto::to_core).transpose()?,
            },
            CertificateDto::EventuallyConstant { leading_zeros, prefix_len, limit } => Certificate::EventuallyConstant {
                leading_zeros: *leading_zeros,
                prefix_len: *prefix_len,
                limit: parse_rational(limit)?,
            },
            CertificateDto::QuasiIsometry => Certificate::QuasiIsometry,
            CertificateDto::PowerPartialIsometry => Certificate::PowerPartialIsometry,
            CertificateDto::MeanNotOne { period, cycle_product } => {
                Certificate::MeanNotOne { period: *period, cycle_product: parse_rational(cycle_product)? }
            }
            CertificateDto::ReciprocalFailure { leading_zeros, index, reason, base, .. } => {
                let reason = match (reason.as_str(), base) {
                    ("magnitude", None) => MagObstruction::Magnitude,
                    ("valuation", Some(b)) => {
                        let r = parse_rational(b)?;
                        if !r.is_integer() {
                            return Err(CliError::Parse(format!("valuation base {b:?} is not an integer")));
                        }
                        MagObstruction::Valuation { base: r.to_integer() }
                    }
                    ("span", None) => MagObstruction::Span,
                    ("unique-solution", None) => MagObstruction::UniqueSolution,
                    _ => return Err(CliError::Parse(format!("unknown obstruction {reason:?}"))),
                };
                Certificate::ReciprocalFailure { leading_zeros: *leading_zeros, index: *index, reason }
            }
            CertificateDto::Band { band } => Certificate::Band(band.to_core()),
            CertificateDto::Undecided { cycle_product, exp_bound, index } => Certificate::Undecided {
                cycle_product: parse_rational(cycle_product)?,
                exp_bound: *exp_bound,
                index: *index,
            },
        })
    }
}

pub fn decision_from_name(s: &str) -> Result<Decision> {
    match s {
        "yes" => Ok(Decision::Yes),
        "no" => Ok(Decision::No),
        "unknown" => Ok(Decision::Unknown),
        _ => Err(CliError::Parse(format!("unknown decision {s:?}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumDto {
    /// `q^(2p)`.
    pub radius_2p: String,
    pub period: usize,
    /// The radius `q` when it is rational.
    pub radius: Option<String>,
    pub citation: String,
    pub note: Option<String>,
}

impl SpectrumDto {
    pub fn from_core(d: &SpectrumDescriptor) -> Self {
        SpectrumDto {
            radius_2p: show_rational(&d.radius_2p),
            period: d.period,
            radius: d.radius.as_ref().map(show_rational),
            citation: "rem:almost-p-spectrum".into(),
            note: d.si_annotation.then(|| SI_SPECTRUM_NOTE.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveDto {
    pub found: bool,
    pub x: Option<String>,
    pub y: Option<String>,
    pub checked: bool,
    pub total_degree: Option<usize>,
}

impl SolveDto {
    pub fn from_core(o: &SearchOutcome) -> Self {
        match o {
            SearchOutcome::Found(w) => SolveDto {
                found: true,
                x: Some(show_factor(&w.x)),
                y: Some(show_factor(&w.y)),
                checked: w.checked,
                total_degree: Some(w.total_degree()),
            },
            SearchOutcome::NotFoundUpTo(_) => SolveDto { found: false, x: None, y: None, checked: false, total_degree: None },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReasonDto {
    SupportMismatch { first: Vec<usize>, second: Vec<usize> },
    ModulusBlocked { point: usize },
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum SimplicityDto {
    /// Exponents over the generators followed by their distinct conjugates.
    Simple { word: Vec<u32> },
    NotSimple { reason: ReasonDto },
    Unknown { exp_bound: u32 },
}

impl SimplicityDto {
    pub fn from_core(v: &SimplicityVerdict) -> Self {
        match v {
            SimplicityVerdict::Simple(w) => SimplicityDto::Simple { word: w.exponents.clone() },
            SimplicityVerdict::NotSimple(r) => SimplicityDto::NotSimple {
                reason: match r {
                    NotSimpleReason::SupportMismatch { first, second } => {
                        ReasonDto::SupportMismatch { first: first.clone(), second: second.clone() }
                    }
                    NotSimpleReason::ModulusBlocked { point } => ReasonDto::ModulusBlocked { point: *point },
                    NotSimpleReason::Exhausted => ReasonDto::Exhausted,
                },
            },
            SimplicityVerdict::Unknown(b) => SimplicityDto::Unknown { exp_bound: *b },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum TwoGenDto {
    SiNonsimple { w: Vec<u32>, w_prime: Vec<u32> },
    NotSi,
    Simple { word: Vec<u32> },
    Unknown { exp_bound: u32 },
}

impl TwoGenDto {
    pub fn from_core(v: &TwoGenVerdict) -> Self {
        match v {
            TwoGenVerdict::SiNonsimple { w, w_prime } => {
                TwoGenDto::SiNonsimple { w: w.exponents.clone(), w_prime: w_prime.exponents.clone() }
            }
            TwoGenVerdict::NotSi => TwoGenDto::NotSi,
            TwoGenVerdict::Simple(w) => TwoGenDto::Simple { word: w.exponents.clone() },
            TwoGenVerdict::Unknown(b) => TwoGenDto::Unknown { exp_bound: *b },
        }
    }
}

pub fn exp_word(v: &[u32]) -> ExpWord {
    ExpWord { exponents: v.to_vec() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDto {
    pub simple: bool,
    pub si: bool,
    pub size: usize,
}

impl OracleDto {
    pub fn from_core(o: &OracleVerdict) -> Self {
        OracleDto { simple: o.simple, si: o.si, size: o.size }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDto {
    /// `not-idempotent`, `normal-idempotent` or `non-normal-idempotent`.
    pub class: String,
    pub si: Option<bool>,
    pub simple: Option<bool>,
    pub partial_isometry: Option<bool>,
    pub normal: bool,
    /// `(a*a)^2 = a*a`.
    pub ata_idempotent: bool,
    /// `a*a` is `0` or `I`.
    pub ata_trivial: bool,
}

impl MatrixDto {
    pub fn from_core(c: &IdempotentClass, r: &ProjectionReport) -> Self {
        let (class, si, simple, pi) = match *c {
            IdempotentClass::NotIdempotent => ("not-idempotent", None, None, None),
            IdempotentClass::NormalIdempotent => ("normal-idempotent", Some(true), None, Some(true)),
            IdempotentClass::NonNormalIdempotent { si, simple, partial_isometry } => {
                ("non-normal-idempotent", Some(si), Some(simple), Some(partial_isometry))
            }
        };
        MatrixDto {
            class: class.into(),
            si,
            simple,
            partial_isometry: pi,
            normal: r.normal,
            ata_idempotent: r.ata_idempotent,
            ata_trivial: r.ata_trivial,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationDto {
    pub max_error: f64,
    pub pass: bool,
}

pub fn wrap(body: Body, input_digest: String) -> Report {
    Report { tool: TOOL.into(), version: env!("CARGO_PKG_VERSION").into(), input_digest, body }
}

/// Human-readable rendering.
pub fn to_text(r: &Report) -> String {
    let mut out = format!("{} {}  input {}\n", r.tool, r.body.command(), &r.input_digest[..16.min(r.input_digest.len())]);
    let mut line = |k: &str, v: String| out.push_str(&format!("  {k:<20} {v}\n"));
    match &r.body {
        Body::ShiftAnalyze { bounds, analysis, .. } => {
            line("si", analysis.si.clone());
            line("simple", analysis.simple.clone());
            line("citation", analysis.citation.clone());
            line("certificate", cert_text(&analysis.certificate));
            if let Some(en) = analysis.essentially_normal {
                line("essentially normal", en.to_string());
            }
            line("spectrum", spectrum_text(&analysis.spectrum));
            line("bounds", bounds_text(bounds));
        }
        Body::ShiftSpectrum { spectrum, .. } => {
            line("spectrum", spectrum_text(spectrum));
            if let Some(n) = &spectrum.note {
                line("note", n.clone());
            }
        }
        Body::Solve { target, bound, result, .. } => {
            line("equation", format!("({target})* = X ({target}) Y"));
            if result.found {
                line("found", format!("X = {}, Y = {}", result.x.as_deref().unwrap_or("?"), result.y.as_deref().unwrap_or("?")));
                line("checked", result.checked.to_string());
            } else {
                line("found", format!("none up to total degree {bound}"));
            }
        }
        Body::FuncsgSimple { exp_bound, citation, result, .. } => {
            line("result", format!("{result:?}"));
            line("citation", citation.clone());
            line("exp bound", exp_bound.to_string());
        }
        Body::FuncsgSi2 { exp_bound, citation, result, .. } => {
            line("result", format!("{result:?}"));
            line("citation", citation.clone());
            line("exp bound", exp_bound.to_string());
        }
        Body::FuncsgOracle { result, .. } => {
            line("simple", result.simple.to_string());
            line("si", result.si.to_string());
            line("semigroup size", result.size.to_string());
        }
        Body::MatrixIdempotent { citation, result, .. } => {
            line("class", result.class.clone());
            let opt = |b: Option<bool>| b.map_or("n/a".to_string(), |b| b.to_string());
            line("si", opt(result.si));
            line("simple", opt(result.simple));
            line("partial isometry", opt(result.partial_isometry));
            line("a*a idempotent", result.ata_idempotent.to_string());
            line("a*a trivial", result.ata_trivial.to_string());
            line("citation", citation.clone());
        }
        Body::OracleTruncation { word, n, window, tolerance, result, .. } => {
            line("word", word.clone());
            line("section", format!("N = {n}, window {window}"));
            line("max error", format!("{:e}", result.max_error));
            line("pass", format!("{} (tolerance {tolerance:e})", result.pass));
        }
    }
    out
}

fn bounds_text(b: &BoundsDto) -> String {
    match b.max_word_len {
        Some(m) => format!("exp_bound {}, max_word_len {m}", b.exp_bound),
        None => format!("exp_bound {}, max_word_len 2p+2", b.exp_bound),
    }
}

fn spectrum_text(s: &SpectrumDto) -> String {
    match &s.radius {
        Some(r) => format!("closed disk of radius {r} (q^{} = {})", 2 * s.period, s.radius_2p),
        None => format!("closed disk of radius q, q^{} = {}", 2 * s.period, s.radius_2p),
    }
}

fn cert_text(c: &CertificateDto) -> String {
    match c {
        CertificateDto::ZeroGap { index, partial_isometry, ideal_generator } => {
            format!("zero gap at {index}; proper ideal generated by {ideal_generator}; power partial isometry {partial_isometry}")
        }
        CertificateDto::Periodic { leading_zeros, period, cycle_product, witness } => {
            let mut s = format!("moduli {period}-periodic after {leading_zeros} zeros, cycle product {cycle_product}");
            if let Some(w) = witness {
                s.push_str(&format!("; T* = ({}) T ({})", w.x, w.y));
            }
            s
        }
        CertificateDto::EventuallyConstant { leading_zeros, prefix_len, limit } => {
            format!("moduli constant {limit} after {prefix_len} terms (and {leading_zeros} zeros)")
        }
        CertificateDto::QuasiIsometry => "(T*T)T = T".into(),
        CertificateDto::PowerPartialIsometry => "every weight has modulus 0 or 1".into(),
        CertificateDto::MeanNotOne { period, cycle_product } => format!("cycle product {cycle_product} over period {period}"),
        CertificateDto::ReciprocalFailure { index, explanation, .. } => format!("reciprocal condition fails at {index}: {explanation}"),
        CertificateDto::Band { band } => format!("band {band:?}"),
        CertificateDto::Undecided { cycle_product, exp_bound, index } => match index {
            Some(i) => format!("undecided (cycle product {cycle_product}; reciprocal search at index {i} exhausted exp_bound {exp_bound})"),
            None => format!("undecided (cycle product {cycle_product}, exp_bound {exp_bound})"),
        },
    }
}
