//! One function per subcommand: input text in, report out.

use shiftlab_core::funcsg::{brute_force_oracle, nonsimple_si_two_gen, simplicity_check, FuncError};
use shiftlab_core::matrixlab::{classify_idempotent, max_window_error, projection_report, truncate, truncate_word};
use shiftlab_core::shiftcheck::{
    is_essentially_normal_shift, si_decide_almost_periodic, spectrum_descriptor, spectrum_descriptor_almost_periodic,
    spectrum_descriptor_with,
};
use shiftlab_core::diagop::ShiftPair;
use shiftlab_core::wordsolver;
use shiftlab_core::{si_decide, Bounds, Decision};

use crate::error::{CliError, Result};
use crate::formats::{digest, from_json, parse_word, FuncsgFile, MatrixFile, ShiftInput, ShiftModel};
use crate::report::{
    wrap, AnalysisDto, Body, BoundsDto, CertificateDto, MatrixDto, OracleDto, Report, SimplicityDto, SolveDto, SpectrumDto,
    TruncationDto, TwoGenDto,
};

pub const DEFAULT_EXP_BOUND: u32 = 4;
pub const DEFAULT_SOLVE_BOUND: usize = 8;

pub const CITE_FUNC_SIMPLE: &str = "thm:cn-arbitrary-generators";
pub const CITE_FUNC_SI2: &str = "thm:tsi";
pub const CITE_IDEMPOTENT: &str = "thm:idempotent";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftOpts {
    pub exp_bound: u32,
    pub max_word_len: Option<usize>,
}

impl Default for ShiftOpts {
    fn default() -> Self {
        ShiftOpts { exp_bound: DEFAULT_EXP_BOUND, max_word_len: None }
    }
}

impl ShiftOpts {
    fn bounds(&self) -> Bounds {
        Bounds { exp_bound: self.exp_bound, max_word_len: self.max_word_len }
    }

    fn dto(&self) -> BoundsDto {
        BoundsDto { exp_bound: self.exp_bound, max_word_len: self.max_word_len }
    }
}

fn func_err(e: FuncError) -> CliError {
    CliError::Invalid(e.to_string())
}

pub fn shift_analyze(text: &str, opts: &ShiftOpts) -> Result<Report> {
    analyze_input(&from_json(text)?, opts)
}

pub fn analyze_input(input: &ShiftInput, opts: &ShiftOpts) -> Result<Report> {
    let input = input.canonical()?;
    let (verdict, essentially_normal, spectrum) = match input.model()? {
        ShiftModel::Weights(s) => {
            let v = si_decide(&s, &opts.bounds());
            let d = spectrum_descriptor_with(&s, v.si == Decision::Yes);
            (v, Some(is_essentially_normal_shift(&s)), d)
        }
        ShiftModel::AlmostPeriodic(d) => (si_decide_almost_periodic(&d), None, spectrum_descriptor_almost_periodic(&d)),
    };
    let analysis = AnalysisDto {
        si: verdict.si.name().into(),
        simple: verdict.simple.name().into(),
        citation: verdict.certificate.citation().into(),
        certificate: CertificateDto::from_core(&verdict.certificate),
        essentially_normal,
        spectrum: SpectrumDto::from_core(&spectrum),
    };
    let d = digest(&input);
    Ok(wrap(Body::ShiftAnalyze { input, bounds: opts.dto(), analysis }, d))
}

pub fn shift_spectrum(text: &str, opts: &ShiftOpts) -> Result<Report> {
    let input = from_json::<ShiftInput>(text)?.canonical()?;
    let spectrum = match input.model()? {
        ShiftModel::Weights(s) => spectrum_descriptor(&s, &opts.bounds()),
        ShiftModel::AlmostPeriodic(d) => spectrum_descriptor_almost_periodic(&d),
    };
    let d = digest(&input);
    Ok(wrap(Body::ShiftSpectrum { input, bounds: opts.dto(), spectrum: SpectrumDto::from_core(&spectrum) }, d))
}

pub fn solve(text: &str, target: &str, bound: usize) -> Result<Report> {
    let input = from_json::<ShiftInput>(text)?.canonical()?;
    let s = input.weights()?;
    let word = parse_word(target)?;
    let outcome = wordsolver::solve(s.weights(), &word, bound).map_err(|e| CliError::Invalid(e.to_string()))?;
    let d = digest(&input);
    Ok(wrap(Body::Solve { input, target: word.to_string(), bound, result: SolveDto::from_core(&outcome) }, d))
}

fn funcsg_input(text: &str) -> Result<(FuncsgFile, Vec<shiftlab_core::funcsg::FiniteFn>)> {
    let gens = from_json::<FuncsgFile>(text)?.to_core()?;
    Ok((FuncsgFile::from_core(&gens), gens))
}

pub fn funcsg_simple(text: &str, exp_bound: u32) -> Result<Report> {
    let (input, gens) = funcsg_input(text)?;
    let v = simplicity_check(&gens, exp_bound).map_err(func_err)?;
    let d = digest(&input);
    Ok(wrap(
        Body::FuncsgSimple { input, exp_bound, citation: CITE_FUNC_SIMPLE.into(), result: SimplicityDto::from_core(&v) },
        d,
    ))
}

pub fn funcsg_si2(text: &str, exp_bound: u32) -> Result<Report> {
    let (input, gens) = funcsg_input(text)?;
    let [f, g] = &gens[..] else {
        return Err(CliError::Invalid(format!("si2 needs exactly 2 generators, found {}", gens.len())));
    };
    let v = nonsimple_si_two_gen(f, g, exp_bound).map_err(func_err)?;
    let d = digest(&input);
    Ok(wrap(Body::FuncsgSi2 { input, exp_bound, citation: CITE_FUNC_SI2.into(), result: TwoGenDto::from_core(&v) }, d))
}

pub fn funcsg_oracle(text: &str) -> Result<Report> {
    let (input, gens) = funcsg_input(text)?;
    let o = brute_force_oracle(&gens).map_err(func_err)?;
    let d = digest(&input);
    Ok(wrap(Body::FuncsgOracle { input, result: OracleDto::from_core(&o) }, d))
}

pub fn matrix_idempotent(text: &str) -> Result<Report> {
    let file: MatrixFile = from_json(text)?;
    let m = file.to_core()?;
    let input = MatrixFile::from_core(&m);
    let result = MatrixDto::from_core(&classify_idempotent(&m), &projection_report(&m));
    let d = digest(&input);
    Ok(wrap(Body::MatrixIdempotent { input, citation: CITE_IDEMPOTENT.into(), result }, d))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationOpts {
    pub n: usize,
    pub window: usize,
    pub tolerance: f64,
}

impl Default for TruncationOpts {
    fn default() -> Self {
        TruncationOpts { n: 64, window: 58, tolerance: 1e-9 }
    }
}

pub fn truncation_error(input: &ShiftInput, word: &str, o: &TruncationOpts) -> Result<f64> {
    if o.n == 0 || o.window > o.n {
        return Err(CliError::Invalid(format!("window {} does not fit in a section of size {}", o.window, o.n)));
    }
    let s = input.weights()?;
    let w = parse_word(word)?;
    let pair = ShiftPair::new(s.weights()).map_err(|e| CliError::Invalid(e.to_string()))?;
    Ok(max_window_error(&truncate(&pair.eval(&w), o.n), &truncate_word(&pair, &w, o.n), o.window))
}

pub fn oracle_truncation(text: &str, word: &str, o: &TruncationOpts) -> Result<Report> {
    let input = from_json::<ShiftInput>(text)?.canonical()?;
    let max_error = truncation_error(&input, word, o)?;
    let word = parse_word(word)?.to_string();
    let d = digest(&input);
    Ok(wrap(
        Body::OracleTruncation {
            input,
            word,
            n: o.n,
            window: o.window,
            tolerance: o.tolerance,
            result: TruncationDto { max_error, pass: max_error <= o.tolerance },
        },
        d,
    ))
}
