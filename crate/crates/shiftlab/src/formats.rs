//! JSON input formats and their conversion to core values.
//!
//! Rationals are strings `"p/q"` or `"p"`. Parsing is strict: no
//! whitespace, no `+` sign, nonzero denominator.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use shiftlab_core::funcsg::FiniteFn;
use shiftlab_core::matrixlab::MatrixQ;
use shiftlab_core::scalar::{ComplexQ, MultScalar, Rational};
use shiftlab_core::shiftcheck::{AlmostPeriodicDescriptor, Band};
use shiftlab_core::{EpSeq, ShiftSpec, Word};

use crate::error::{CliError, Result};

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || CliError::Parse(format!("bad rational {s:?}"));
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let num_ok = digits(num.strip_prefix('-').unwrap_or(num));
    if !num_ok || !digits(den) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if num_traits::Zero::is_zero(&d) {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn show_rational(r: &Rational) -> String {
    r.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarDto {
    pub mag2: String,
    pub phase: String,
}

impl ScalarDto {
    pub fn from_core(s: &MultScalar) -> Self {
        ScalarDto { mag2: show_rational(s.mag2()), phase: show_rational(s.phase()) }
    }

    pub fn to_core(&self) -> Result<MultScalar> {
        MultScalar::new(parse_rational(&self.mag2)?, parse_rational(&self.phase)?).map_err(|e| CliError::Parse(e.to_string()))
    }
}

fn scalars(v: &[ScalarDto]) -> Result<Vec<MultScalar>> {
    v.iter().map(ScalarDto::to_core).collect()
}

fn dtos(v: &[MultScalar]) -> Vec<ScalarDto> {
    v.iter().map(ScalarDto::from_core).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpSeqDto {
    pub prefix: Vec<ScalarDto>,
    pub cycle: Vec<ScalarDto>,
}

impl EpSeqDto {
    /// Canonical form.
    pub fn from_core(e: &EpSeq) -> Self {
        EpSeqDto { prefix: dtos(e.prefix()), cycle: dtos(e.cycle()) }
    }

    pub fn to_core(&self) -> Result<EpSeq> {
        EpSeq::new(scalars(&self.prefix)?, scalars(&self.cycle)?).map_err(|e| CliError::Invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandDto {
    AllBelowOne(usize),
    AllAboveOne(usize),
}

impl BandDto {
    pub fn from_core(b: Band) -> Self {
        match b {
            Band::AllBelowOne(i) => BandDto::AllBelowOne(i),
            Band::AllAboveOne(i) => BandDto::AllAboveOne(i),
        }
    }

    pub fn to_core(self) -> Band {
        match self {
            BandDto::AllBelowOne(i) => Band::AllBelowOne(i),
            BandDto::AllAboveOne(i) => Band::AllAboveOne(i),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsFile {
    pub weights: EpSeqDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlmostPeriodicFile {
    pub limit_cycle: Vec<ScalarDto>,
    #[serde(default)]
    pub band: Option<BandDto>,
}

/// A shift spec file: `{"weights": {...}}`, a bare `{"prefix", "cycle"}`
/// sequence, or an almost periodic descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShiftInput {
    Weights(WeightsFile),
    Bare(EpSeqDto),
    AlmostPeriodic(AlmostPeriodicFile),
}

pub enum ShiftModel {
    Weights(ShiftSpec),
    AlmostPeriodic(AlmostPeriodicDescriptor),
}

impl ShiftInput {
    pub fn model(&self) -> Result<ShiftModel> {
        match self {
            ShiftInput::Weights(WeightsFile { weights: e }) | ShiftInput::Bare(e) => {
                Ok(ShiftModel::Weights(ShiftSpec::new(e.to_core()?).map_err(|e| CliError::Invalid(e.to_string()))?))
            }
            ShiftInput::AlmostPeriodic(a) => {
                let cycle = EpSeq::periodic(scalars(&a.limit_cycle)?).map_err(|e| CliError::Invalid(e.to_string()))?;
                let d = AlmostPeriodicDescriptor::new(cycle, a.band.map(BandDto::to_core))
                    .map_err(|e| CliError::Invalid(e.to_string()))?;
                Ok(ShiftModel::AlmostPeriodic(d))
            }
        }
    }

    /// Equivalent inputs share one canonical form, and so one digest.
    pub fn canonical(&self) -> Result<ShiftInput> {
        Ok(match self.model()? {
            ShiftModel::Weights(s) => ShiftInput::Weights(WeightsFile { weights: EpSeqDto::from_core(s.weights()) }),
            ShiftModel::AlmostPeriodic(d) => ShiftInput::AlmostPeriodic(AlmostPeriodicFile {
                limit_cycle: dtos(d.limit_cycle().cycle()),
                band: d.band().map(BandDto::from_core),
            }),
        })
    }

    pub fn weights(&self) -> Result<ShiftSpec> {
        match self.model()? {
            ShiftModel::Weights(s) => Ok(s),
            ShiftModel::AlmostPeriodic(_) => Err(CliError::Invalid("this command needs explicit weights".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuncsgFile {
    pub space_size: usize,
    pub generators: Vec<Vec<ScalarDto>>,
}

impl FuncsgFile {
    pub fn from_core(gens: &[FiniteFn]) -> Self {
        FuncsgFile { space_size: gens[0].space_size(), generators: gens.iter().map(|g| dtos(g.values())).collect() }
    }

    pub fn canonical(&self) -> Result<Self> {
        Ok(FuncsgFile::from_core(&self.to_core()?))
    }

    pub fn to_core(&self) -> Result<Vec<FiniteFn>> {
        if self.generators.is_empty() {
            return Err(CliError::Invalid("no generators".into()));
        }
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                if g.len() != self.space_size {
                    return Err(CliError::Invalid(format!("generator {} has {} values, expected {}", i + 1, g.len(), self.space_size)));
                }
                let f = FiniteFn::new(scalars(g)?);
                if f.is_zero() {
                    return Err(CliError::Invalid(format!("generator {} is zero", i + 1)));
                }
                Ok(f)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDto {
    pub re: String,
    pub im: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub entries: Vec<Vec<ComplexDto>>,
}

impl MatrixFile {
    pub fn to_core(&self) -> Result<MatrixQ> {
        if self.entries.len() != self.dim {
            return Err(CliError::Invalid(format!("expected {} rows, found {}", self.dim, self.entries.len())));
        }
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|c| Ok(ComplexQ::new(parse_rational(&c.re)?, parse_rational(&c.im)?))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        MatrixQ::from_rows(rows).map_err(|e| CliError::Invalid(e.to_string()))
    }

    pub fn from_core(m: &MatrixQ) -> Self {
        let entries = m
            .rows()
            .iter()
            .map(|r| r.iter().map(|c| ComplexDto { re: show_rational(&c.re), im: show_rational(&c.im) }).collect())
            .collect();
        MatrixFile { dim: m.dim(), entries }
    }
}

pub fn parse_word(s: &str) -> Result<Word> {
    s.parse().map_err(|e: shiftlab_core::diagop::WordParseError| CliError::Parse(format!("word {s:?}: {e}")))
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

/// SHA-256 of the compact JSON encoding.
pub fn digest<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("report values serialize");
    hex::encode(Sha256::digest(&bytes))
}
