//! `wedgenet`: run modular-theory checks on discretized wedge nets from a
//! TOML experiment description.
//!
//! Exit codes: `0` all enabled checks passed, `1` at least one check row
//! failed, `2` configuration or usage error.

mod config;
mod output;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::ExperimentConfig;

#[derive(Parser)]
#[command(
    name = "wedgenet",
    about = "Numerical laboratory for modular theory of standard subspaces on wedge nets",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment description (TOML).
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Override the sampling seed from the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Multiply every tolerance by this factor (certificate-preserving).
    #[arg(long, default_value_t = 1.0)]
    tolerance_scale: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check enabled in the configuration and emit a CSV report.
    Run(CommonArgs),
    /// Emit the flow-comparison curve `t ↦ ‖Δ^{-it}·U(Λ(-2πt)) − 1‖` as CSV.
    Zcurve(CommonArgs),
    /// Emit only the commutant/modularity decision rows as CSV.
    Commutant(CommonArgs),
    /// Emit per-sector grid diagnostics (dimensions, spectra, defects) as CSV.
    GridInfo(CommonArgs),
}

fn load(common: &CommonArgs) -> anyhow::Result<ExperimentConfig> {
    if !(common.tolerance_scale.is_finite() && common.tolerance_scale > 0.0) {
        anyhow::bail!(
            "--tolerance-scale must be a positive finite number, got {}",
            common.tolerance_scale
        );
    }
    let mut cfg = ExperimentConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.sampling.seed = seed;
    }
    Ok(cfg)
}

fn emit(common: &CommonArgs, body: &[u8]) -> anyhow::Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| anyhow::anyhow!("writing {}: {e}", path.display())),
        None => {
            use std::io::Write as _;
            std::io::stdout().write_all(body)?;
            Ok(())
        }
    }
}

/// Report verdict: `true` iff every row passes.
fn run_report(common: &CommonArgs) -> anyhow::Result<bool> {
    let cfg = load(common)?;
    let mut rows = pipeline::run_checks(&cfg)?;
    output::apply_tolerances(&mut rows, &cfg.tolerances, common.tolerance_scale);
    output::sort_and_dedup(&mut rows);
    let all_pass = rows.iter().all(|r| r.pass);
    let failed = rows.iter().filter(|r| !r.pass).count();
    let mut buf = Vec::new();
    output::write_report(&mut buf, &rows)?;
    emit(common, &buf)?;
    eprintln!(
        "wedgenet: {} rows, {} failed{}",
        rows.len(),
        failed,
        if all_pass { " — all checks passed" } else { "" }
    );
    Ok(all_pass)
}

fn run_zcurve(common: &CommonArgs) -> anyhow::Result<bool> {
    let cfg = load(common)?;
    let samples = pipeline::z_curve(&cfg)?;
    let mut buf = Vec::new();
    output::write_curve(&mut buf, &samples)?;
    emit(common, &buf)?;
    eprintln!("wedgenet: {} curve samples", samples.len());
    Ok(true)
}

fn run_commutant(common: &CommonArgs) -> anyhow::Result<bool> {
    let cfg = load(common)?;
    let mut rows = pipeline::commutant_report(&cfg)?;
    output::apply_tolerances(&mut rows, &cfg.tolerances, common.tolerance_scale);
    output::sort_and_dedup(&mut rows);
    let all_pass = rows.iter().all(|r| r.pass);
    let mut buf = Vec::new();
    output::write_report(&mut buf, &rows)?;
    emit(common, &buf)?;
    eprintln!("wedgenet: {} commutant rows", rows.len());
    Ok(all_pass)
}

fn run_grid_info(common: &CommonArgs) -> anyhow::Result<bool> {
    let cfg = load(common)?;
    let rows = pipeline::grid_info(&cfg)?;
    let mut buf = Vec::new();
    output::write_grid_info(&mut buf, &rows)?;
    emit(common, &buf)?;
    eprintln!("wedgenet: {} sectors", rows.len());
    Ok(true)
}

fn main() -> ExitCode {
    // Timing-sensitive comparisons assume a single deterministic thread.
    faer::set_global_parallelism(faer::Par::Seq);
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(c) => run_report(c),
        Command::Zcurve(c) => run_zcurve(c),
        Command::Commutant(c) => run_commutant(c),
        Command::GridInfo(c) => run_grid_info(c),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
