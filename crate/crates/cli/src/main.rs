//! `pwrc`: batch indicator evaluation, curve export, the seeded split
//! protocol, and synthetic experiments, on top of the library of the same
//! name.
//!
//! Exit codes: 0 success, 2 input validation failure, 3 I/O failure,
//! 4 degenerate data (e.g. a zero-width threshold range).

mod artifacts;
mod report;
mod support;
mod synth;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pwrc::indicator::{ActivationConfig, WeightScheme, DEFAULT_C1};
use pwrc::model::TiePolicy;

use support::CliResult;

#[derive(Parser)]
#[command(
    name = "pwrc",
    version,
    about = "Perceptually weighted rank correlation for IQA metric evaluation"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Print SRCC/KRCC/PWRC/AUCca/dMOS per metric on the full dataset.
    Eval(report::EvalArgs),
    /// Export per-metric SA-ST curve CSVs plus an overlay SVG.
    Curve(artifacts::CurveArgs),
    /// Print the confidence-aware AUC per metric.
    Auc(report::AucArgs),
    /// Print each indicator's disagreements with the push-accuracy ranking.
    Compare(report::CompareArgs),
    /// Run the seeded multi-trial split protocol and write its reports.
    SplitRun(artifacts::SplitRunArgs),
    /// Synthetic experiments: permutation tables and opinion panels.
    Synth(synth::SynthArgs),
}

/// The three canonical input files.
#[derive(Args)]
pub struct DatasetArgs {
    /// Subjective scores CSV: `id,score,stddev,group,polarity`.
    #[arg(long)]
    pub scores: PathBuf,
    /// Prediction table CSV: `id,<metric>,...`.
    #[arg(long)]
    pub preds: PathBuf,
    /// Metric polarity sidecar CSV: `metric,polarity`.
    #[arg(long)]
    pub polarity: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum, Default)]
pub enum TieArg {
    /// Fail on any exact tie.
    #[default]
    Strict,
    /// Break ties by input position.
    Stable,
    /// Mid-rank ties (Spearman only; rejected by the indicator path).
    Average,
}

/// Indicator shape flags shared by every evaluating verb.
#[derive(Args)]
pub struct IndicatorArgs {
    #[arg(long, value_enum, default_value_t = TieArg::Strict)]
    pub tie_policy: TieArg,
    /// Activation steepness override (default 0.175).
    #[arg(long)]
    pub c1: Option<f64>,
    /// Uniform pair weights instead of the perceptual weighting.
    #[arg(long)]
    pub uniform_weights: bool,
    /// Pin the activation to 1 (with uniform weights the PWRC column
    /// becomes exactly KRCC).
    #[arg(long)]
    pub constant_activation: bool,
}

impl IndicatorArgs {
    pub fn tie_policy(&self) -> TiePolicy {
        match self.tie_policy {
            TieArg::Strict => TiePolicy::Strict,
            TieArg::Stable => TiePolicy::StableOrder,
            TieArg::Average => TiePolicy::Average,
        }
    }

    pub fn weights(&self) -> WeightScheme {
        if self.uniform_weights {
            WeightScheme::Uniform
        } else {
            WeightScheme::Perceptual
        }
    }

    pub fn pwrc_config(&self) -> CliResult<pwrc::PwrcConfig> {
        let activation = if self.constant_activation {
            ActivationConfig::constant()
        } else {
            ActivationConfig::soft(self.c1.unwrap_or(DEFAULT_C1))?
        };
        Ok(pwrc::PwrcConfig {
            activation,
            weights: self.weights(),
        })
    }
}

/// AUC integration bounds and sampling.
#[derive(Args)]
pub struct RangeArgs {
    /// Lower integration bound, or `auto` for 2 * min normalized stddev.
    #[arg(long, default_value = "auto")]
    pub tmin: String,
    /// Upper integration bound, or `auto` for 2 * max normalized stddev.
    #[arg(long, default_value = "auto")]
    pub tmax: String,
    /// Integration grid sample count.
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = match cli.verb {
        Verb::Eval(args) => report::eval(args),
        Verb::Curve(args) => artifacts::curve(args),
        Verb::Auc(args) => report::auc(args),
        Verb::Compare(args) => report::compare(args),
        Verb::SplitRun(args) => artifacts::split_run(args),
        Verb::Synth(args) => synth::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
