//! `twomode`: dephasing dynamics, entanglement and Fisher information of
//! two-mode boson states from the command line.
//!
//! Exit status: 0 on success, 1 on I/O failure, 2 on invalid usage or input.

mod commands;
mod config;
mod output;
mod svg;

use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "twomode", version, about = "Collective dephasing of two-mode bosons")]
struct Cli {
    /// key = value file supplying defaults for any flag
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write ρ(t) of |N,0⟩_CD under dephasing as k,l,re,im rows
    Evolve(EvolveArgs),
    /// Dissipative QFI, its bounds and the exact SLD QFI at one point
    Qfi(QfiArgs),
    /// Negativity of ρ(t) across the AB and/or CD bipartition
    Negativity(NegativityArgs),
    /// Sweep over N and t; CSV plus an optional log-log SVG
    Sweep(SweepArgs),
    /// Power-law fits of a sweep CSV, one per t
    Fit(FitArgs),
    /// Regenerate the scaling figure: CSV, fits and two SVG panels
    Figure1(Figure1Args),
}

#[derive(Debug, Args)]
struct PointArgs {
    /// Number of bosons
    #[arg(long = "n", short = 'N')]
    n: Option<usize>,
    /// Dephasing rate
    #[arg(long)]
    gamma: Option<f64>,
    /// Time
    #[arg(long, short = 't')]
    t: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Basis {
    AB,
    CD,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Quadrature,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LambdaMax {
    Exact,
    #[value(alias = "diagonal_approx")]
    DiagonalApprox,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SeriesArg {
    Diss,
    Lower,
    #[value(alias = "practical_lower")]
    PracticalLower,
    Exact,
}

#[derive(Debug, Args)]
struct EvolveArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Basis of the written matrix
    #[arg(long, value_enum, ignore_case = true)]
    basis: Option<Basis>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// Output CSV (stdout if omitted)
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct QfiArgs {
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, value_enum)]
    lambda_max_mode: Option<LambdaMax>,
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct NegativityArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Bipartition; both if omitted
    #[arg(long, value_enum, ignore_case = true)]
    basis: Option<Basis>,
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Comma list or start:end:step
    #[arg(long)]
    n_list: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Comma list of times
    #[arg(long)]
    t_list: Option<String>,
    #[arg(long, value_enum)]
    lambda_max_mode: Option<LambdaMax>,
    /// Output CSV (stdout if omitted)
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    /// Also write a log-log SVG next to the CSV
    #[arg(long)]
    plot: bool,
    /// Quantity drawn in the plot
    #[arg(long, value_enum)]
    series: Option<SeriesArg>,
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Sweep CSV to fit
    #[arg(long, short = 'i')]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    series: Option<SeriesArg>,
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Figure1Args {
    /// Directory for figure1.csv, figure1_fits.csv and the two SVG panels
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    n_list: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    t_list: Option<String>,
    #[arg(long, value_enum)]
    lambda_max_mode: Option<LambdaMax>,
}

fn exit_status(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<io::Error>() {
            return 1;
        }
        if let Some(e) = cause.downcast_ref::<csv::Error>() {
            if e.is_io_error() {
                return 1;
            }
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_status(&err))
        }
    }
}
