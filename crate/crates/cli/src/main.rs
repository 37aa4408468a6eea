//! `dispersion`: analyze laws, sweep parameters or truncation thresholds, and run oracle checks.

mod commands;
mod format;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dispersion_core::Side;

#[derive(Parser, Debug)]
#[command(name = "dispersion", version, about = "SD versus GMD: dispersion, hazard diagnostics and ordering certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// SD, GMD, hazard report and ordering verdict for one law
    Analyze(AnalyzeArgs),
    /// Sweep one family parameter written as `_` in `--dist`
    Sweep(SweepArgs),
    /// SD and GMD of tail laws over a threshold grid
    TruncateSweep(TruncateArgs),
    /// Hazard and reverse hazard rates over a grid of points
    HazardCurve(CurveArgs),
    /// Compare analytic values with Monte Carlo and, for lattice laws, pair enumeration
    Verify(VerifyArgs),
    /// Registered families and their parameters
    ListFamilies(OutputArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output format (default depends on the command)
    #[arg(long, value_enum)]
    pub output: Option<Format>,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Law as `family:k=v[,k=v...]`
    #[arg(long)]
    pub dist: String,
    #[command(flatten)]
    pub io: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Law with the swept parameter written as `_`, e.g. `gamma:alpha=_`
    #[arg(long)]
    pub dist: String,
    /// Parameter grid `a:b:step`
    #[arg(long, allow_hyphen_values = true)]
    pub range: String,
    /// Add `lambda,odds_bound,bound_gap` columns (lattice families); `bound_gap = gmd - odds_bound`
    #[arg(long)]
    pub concentration: bool,
    #[command(flatten)]
    pub io: OutputArgs,
}

#[derive(Args, Debug)]
pub struct TruncateArgs {
    #[arg(long)]
    pub dist: String,
    /// Threshold grid `a:b:step`
    #[arg(long, allow_hyphen_values = true)]
    pub range: String,
    /// `lower` keeps `X > u`, `upper` keeps `X <= u`
    #[arg(long, default_value = "lower")]
    pub side: Side,
    /// Add a `holds` column for this tail criterion
    /// (`tail-hazard-monotone` or `tail-density-logconcave`)
    #[arg(long)]
    pub criterion: Option<String>,
    #[command(flatten)]
    pub io: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    #[arg(long)]
    pub dist: String,
    /// Evaluation grid `a:b:step`
    #[arg(long, allow_hyphen_values = true)]
    pub range: String,
    #[command(flatten)]
    pub io: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub dist: String,
    /// Monte Carlo pair count
    #[arg(long, default_value_t = 1_000_000)]
    pub mc_n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub io: OutputArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (result, io) = match &cli.command {
        Command::Analyze(a) => (commands::analyze(a), &a.io),
        Command::Sweep(a) => (commands::sweep(a), &a.io),
        Command::TruncateSweep(a) => (commands::truncate_sweep(a), &a.io),
        Command::HazardCurve(a) => (commands::hazard_curve(a), &a.io),
        Command::Verify(a) => (commands::verify(a), &a.io),
        Command::ListFamilies(a) => (commands::list_families(a), a),
    };
    match result.and_then(|text| emit(&text, io)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit(text: &str, io: &OutputArgs) -> Result<(), commands::CliError> {
    match &io.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
