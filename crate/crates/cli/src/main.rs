/// `println!` that ignores a closed stdout instead of panicking.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

mod artifacts;
mod commands;
mod config;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use dilab_core::besov::CORPUS_SEED;
use dilab_core::lab::Backend;
use dilab_core::pde::{Datum, Equation};
use dilab_core::Error as CoreError;
use std::path::PathBuf;
use std::process::ExitCode;

/// Exit statuses.
pub mod status {
    pub const PASS: u8 = 0;
    pub const CONFIG: u8 = 2;
    pub const PRECONDITION: u8 = 3;
    pub const NUMERICAL: u8 = 4;
    pub const VERIFICATION: u8 = 5;
}

/// Errors raised by the driver itself, carried through `anyhow`.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numerical(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

/// Modulation, Besov and dilation experiments.
#[derive(Parser, Debug)]
#[command(name = "dilab", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Fixed grid size per axis (needs --half-width).
    #[arg(long, global = true)]
    pub grid_n: Option<usize>,
    /// Fixed grid half width L, grid on [-L, L).
    #[arg(long, global = true)]
    pub half_width: Option<f64>,
    /// Norm estimator: continuous STFT or Gabor frame coefficients.
    #[arg(long, global = true, default_value = "continuous")]
    pub backend: Backend,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Seed for the signal corpus.
    #[arg(long, global = true, default_value_t = CORPUS_SEED)]
    pub seed: u64,
    /// Pass tolerance of the command (see each command).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Manifest of `key = value` lines with [global] and per-command sections.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dilation indices and region membership of (p, q).
    Index(IndexArgs),
    /// Modulation norm of one signal.
    Norm(NormArgs),
    /// Dilation sweep of a family with slope fit against the predicted law.
    Scaling(ScalingArgs),
    /// Sharpness cases: fitted slopes against the sharp exponents.
    Verify(VerifyArgs),
    /// Besov dilation slopes against the envelope.
    Besov(BesovArgs),
    /// Wave or plate propagation with norm growth tracking.
    Pde(PdeArgs),
    /// Besov and modulation embedding ratios over the corpus.
    Embed(EmbedArgs),
}

fn exponent(s: &str) -> Result<f64, String> {
    dilab_core::index::parse_exponent(s).map_err(|e| e.to_string())
}

/// A real number, also written as a fraction `a/b`.
pub fn real(s: &str) -> Result<f64, String> {
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("bad number '{s}'"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("bad number '{s}'"))?;
            a / b
        }
        None => s.trim().parse().map_err(|_| format!("bad number '{s}'"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

#[derive(Args, Debug, Clone)]
pub struct Space {
    /// Lebesgue exponent p (`inf` for ∞).
    #[arg(long, value_parser = exponent)]
    pub p: f64,
    /// Lebesgue exponent q (`inf` for ∞).
    #[arg(long, value_parser = exponent)]
    pub q: f64,
    /// Time weight exponent.
    #[arg(long, value_parser = real, default_value = "0", allow_hyphen_values = true)]
    pub t: f64,
    /// Frequency weight exponent.
    #[arg(long, value_parser = real, default_value = "0", allow_hyphen_values = true)]
    pub s: f64,
}

#[derive(Args, Debug)]
pub struct IndexArgs {
    #[arg(long, value_parser = exponent)]
    pub p: f64,
    #[arg(long, value_parser = exponent)]
    pub q: f64,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
}

#[derive(Args, Debug)]
pub struct NormArgs {
    #[command(flatten)]
    pub space: Space,
    /// Corpus signal name.
    #[arg(long, default_value = "gauss", conflicts_with = "input")]
    pub signal: String,
    /// Sampled signal file (`index,re,im` CSV with grid header).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Dilation applied to a corpus signal before measuring.
    #[arg(long, value_parser = real, default_value = "1")]
    pub lambda: f64,
}

#[derive(Args, Debug)]
pub struct ScalingArgs {
    #[command(flatten)]
    pub space: Space,
    /// Family name, e.g. gaussian, istar1_a, lattice_psi_q.
    #[arg(long)]
    pub family: String,
    /// Smallest λ of the ratio-2 grid.
    #[arg(long, value_parser = real)]
    pub lambda_lo: Option<f64>,
    /// Largest λ of the ratio-2 grid.
    #[arg(long, value_parser = real)]
    pub lambda_hi: Option<f64>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Case id, e.g. I1s_tpos; repeatable.
    #[arg(long = "case", required_unless_present = "all")]
    pub cases: Vec<String>,
    /// Run all 24 cases.
    #[arg(long)]
    pub all: bool,
}

#[derive(Args, Debug)]
pub struct BesovArgs {
    #[arg(long, value_parser = exponent)]
    pub p: f64,
    #[arg(long, value_parser = exponent)]
    pub q: f64,
    /// Smoothness s.
    #[arg(long, value_parser = real, default_value = "0", allow_hyphen_values = true)]
    pub s: f64,
    /// Corpus signal name.
    #[arg(long, default_value = "gauss")]
    pub signal: String,
    #[arg(long, value_parser = real, default_value = "1/64")]
    pub lambda_lo: f64,
    #[arg(long, value_parser = real, default_value = "64")]
    pub lambda_hi: f64,
}

#[derive(Args, Debug)]
pub struct PdeArgs {
    #[command(flatten)]
    pub space: Space,
    #[arg(long, default_value = "wave")]
    pub equation: Equation,
    /// Non-zero initial datum: u0, u1 or mixed (Gaussians).
    #[arg(long, default_value = "u0")]
    pub datum: Datum,
    #[arg(long, value_parser = real, default_value = "16")]
    pub t_max: f64,
    #[arg(long, value_parser = real, default_value = "0.5")]
    pub dt: f64,
    /// Start of the fit window in t.
    #[arg(long, value_parser = real, default_value = "1")]
    pub fit_from: f64,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    /// Restrict to one embedding: incl_i, incl_ii, besov_mp, besov_mpp.
    #[arg(long)]
    pub label: Option<String>,
    /// Largest admissible ratio max/median.
    #[arg(long, value_parser = real, default_value = "10")]
    pub factor: f64,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(f) = err.downcast_ref::<Failure>() {
        return match f {
            Failure::Config(_) => status::CONFIG,
            Failure::Numerical(_) => status::NUMERICAL,
        };
    }
    if let Some(e) = err.downcast_ref::<CoreError>() {
        return match e {
            CoreError::InvalidParameter(_) | CoreError::Unsupported(_) => status::CONFIG,
            CoreError::Precondition(_) => status::PRECONDITION,
            e if e.is_numerical() => status::NUMERICAL,
            _ => 1,
        };
    }
    1
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let argv = match config::merge_manifest(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(status::CONFIG);
        }
    };
    let matches = match Cli::command().try_get_matches_from(&argv) {
        Ok(m) => m,
        Err(e) => e.exit(),
    };
    let hash = config::config_hash(&matches);
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match commands::run(&cli, hash) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
