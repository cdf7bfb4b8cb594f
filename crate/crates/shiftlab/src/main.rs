use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shiftlab::commands::{self, ShiftOpts, TruncationOpts, DEFAULT_EXP_BOUND, DEFAULT_SOLVE_BOUND};
use shiftlab::error::{CliError, Result};
use shiftlab::report::{to_text, Report};
use shiftlab::verify::verify_report;

/// Decides the SI property and simplicity of semigroups generated by weighted
/// shifts, commuting functions and idempotent matrices.
#[derive(Parser)]
#[command(name = "shiftlab", version, args_conflicts_with_subcommands = true)]
struct Cli {
    /// Re-check a saved JSON report and exit 0 if every certificate holds.
    #[arg(long, value_name = "REPORT")]
    verify_certificate: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Weighted shift analysis.
    #[command(subcommand)]
    Shift(ShiftCommand),
    /// Search for X, Y with target* = X target Y.
    Solve {
        spec: PathBuf,
        /// Word such as "T" or "T*^2 T".
        #[arg(long, default_value = "T")]
        target: String,
        /// Total degree bound, including the target word.
        #[arg(long)]
        bound: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Semigroups generated by functions on a finite set.
    #[command(subcommand)]
    Funcsg(FuncsgCommand),
    /// Exact matrix checks.
    #[command(subcommand)]
    Matrix(MatrixCommand),
    /// Floating-point cross-checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand)]
enum ShiftCommand {
    /// SI and simplicity verdicts with certificates.
    Analyze {
        spec: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Spectral radius data.
    Spectrum {
        spec: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum FuncsgCommand {
    /// Simplicity via the support and word criterion.
    Simple {
        file: PathBuf,
        #[arg(long)]
        exp_bound: Option<u32>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Nonsimple SI test for two generators.
    Si2 {
        file: PathBuf,
        #[arg(long)]
        exp_bound: Option<u32>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Enumerate the whole semigroup (root-of-unity values only).
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum MatrixCommand {
    /// Classify an idempotent matrix.
    Idempotent {
        file: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Compare exact word evaluation with products of finite sections.
    Truncation {
        spec: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 58)]
        window: usize,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct BoundArgs {
    /// Per-factor exponent bound for the reciprocal search.
    #[arg(long)]
    exp_bound: Option<u32>,
    /// Total degree bound for witness words (default 2p + 2).
    #[arg(long)]
    max_word_len: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Exit with status 4 when a bound was exhausted.
    #[arg(long)]
    strict: bool,
}

/// `SHIFTLAB_DEFAULT_BOUND` replaces the built-in default bounds.
fn env_bound() -> Result<Option<u64>> {
    match std::env::var("SHIFTLAB_DEFAULT_BOUND") {
        Ok(v) => v.parse().map(Some).map_err(|_| CliError::Parse(format!("SHIFTLAB_DEFAULT_BOUND={v:?} is not a number"))),
        Err(_) => Ok(None),
    }
}

fn exp_bound(flag: Option<u32>) -> Result<u32> {
    match flag {
        Some(b) => Ok(b),
        None => Ok(env_bound()?.map_or(DEFAULT_EXP_BOUND, |b| b as u32)),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn emit(report: &Report, out: &OutputArgs) -> Result<i32> {
    let text = match out.format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        Format::Text => to_text(report),
    };
    write_stdout(&text)?;
    Ok(if out.strict && report.body.is_unknown() { 4 } else { 0 })
}

/// A closed pipe (`shiftlab ... | head`) is not an error.
fn write_stdout(text: &str) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io { path: "<stdout>".into(), source: e }),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<i32> {
    if let Some(path) = cli.verify_certificate {
        let report: Report = serde_json::from_str(&read(&path)?)?;
        verify_report(&report)?;
        write_stdout(&format!("certificate verified: {} {}\n", report.body.command(), report.input_digest))?;
        return Ok(0);
    }
    let Some(command) = cli.command else {
        return Err(CliError::Parse("a subcommand or --verify-certificate is required".into()));
    };
    let shift_opts = |b: &BoundArgs| -> Result<ShiftOpts> { Ok(ShiftOpts { exp_bound: exp_bound(b.exp_bound)?, max_word_len: b.max_word_len }) };
    let (report, out) = match &command {
        Command::Shift(ShiftCommand::Analyze { spec, bounds, out }) => (commands::shift_analyze(&read(spec)?, &shift_opts(bounds)?)?, out),
        Command::Shift(ShiftCommand::Spectrum { spec, bounds, out }) => (commands::shift_spectrum(&read(spec)?, &shift_opts(bounds)?)?, out),
        Command::Solve { spec, target, bound, out } => {
            let bound = match bound {
                Some(b) => *b,
                None => env_bound()?.map_or(DEFAULT_SOLVE_BOUND, |b| b as usize),
            };
            (commands::solve(&read(spec)?, target, bound)?, out)
        }
        Command::Funcsg(FuncsgCommand::Simple { file, exp_bound: b, out }) => (commands::funcsg_simple(&read(file)?, exp_bound(*b)?)?, out),
        Command::Funcsg(FuncsgCommand::Si2 { file, exp_bound: b, out }) => (commands::funcsg_si2(&read(file)?, exp_bound(*b)?)?, out),
        Command::Funcsg(FuncsgCommand::Oracle { file, out }) => (commands::funcsg_oracle(&read(file)?)?, out),
        Command::Matrix(MatrixCommand::Idempotent { file, out }) => (commands::matrix_idempotent(&read(file)?)?, out),
        Command::Oracle(OracleCommand::Truncation { spec, word, n, window, tolerance, out }) => {
            let o = TruncationOpts { n: *n, window: *window, tolerance: *tolerance };
            (commands::oracle_truncation(&read(spec)?, word, &o)?, out)
        }
    };
    emit(&report, out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("shiftlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
