//! File-producing verbs: `curve` and `split-run`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use pwrc::chart::{curve_csv, render_line_chart, ChartSeries};
use pwrc::dataset::Dataset;
use pwrc::harness::{run_protocol, IndicatorConfig, ProtocolOutcome, SplitSpec, SplitUnit};
use pwrc::indicator::sa_st_curve;
use pwrc::model::ground_truth_pairing;

use crate::support::{self, invalid, CliResult, Failure};
use crate::{DatasetArgs, IndicatorArgs};

#[derive(Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub indicator: IndicatorArgs,
    /// Threshold samples as `lo:hi:count`.
    #[arg(long, default_value = "0:100:20")]
    pub grid: String,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub porcelain: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Default)]
pub enum UnitArg {
    /// Partition content groups.
    #[default]
    Group,
    /// Partition individual items.
    Item,
}

impl UnitArg {
    fn to_split_unit(self) -> SplitUnit {
        match self {
            UnitArg::Group => SplitUnit::ByGroup,
            UnitArg::Item => SplitUnit::ByItem,
        }
    }
}

#[derive(Args)]
pub struct SplitRunArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub indicator: IndicatorArgs,
    /// Fraction of units in the training partition (default 0.8).
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Number of random split trials (default 1000).
    #[arg(long)]
    pub trials: Option<u32>,
    /// Protocol seed (default 0); identical seeds reproduce identical splits.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = UnitArg::Group)]
    pub unit: UnitArg,
    /// Worker threads for the trial loop; results do not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Report-curve samples as `lo:hi:count` (default 0:100:20).
    #[arg(long)]
    pub grid: Option<String>,
    /// AUC integration grid sample count (default 101).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Key-value run-config file; explicit flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub porcelain: bool,
}

/// Writes one curve CSV per metric plus an overlay SVG, and returns the
/// paths written.
fn export_curves(
    dataset: &Dataset,
    indicator: &IndicatorArgs,
    grid: &[f64],
    out_dir: &Path,
) -> CliResult<Vec<PathBuf>> {
    support::ensure_dir(out_dir)?;
    let config = indicator.pwrc_config()?;
    let mut written = Vec::new();
    let mut series = Vec::new();
    for (name, pred) in &dataset.metrics {
        let pairing = ground_truth_pairing(&dataset.scores, pred, None, indicator.tie_policy())?;
        let curve = sa_st_curve(
            &pairing.normalized,
            &pairing.ground_truth,
            &pairing.predicted,
            grid,
            &config,
        )?;
        let path = out_dir.join(format!("curve_{name}.csv"));
        support::atomic_write(&path, &curve_csv(&curve))?;
        written.push(path);
        series.push(ChartSeries::from_curve(name.clone(), &curve));
    }
    let svg = render_line_chart(&series, "Sensory threshold T", "SA")?;
    let path = out_dir.join("curves.svg");
    support::atomic_write(&path, &svg)?;
    written.push(path);
    Ok(written)
}

pub fn curve(args: CurveArgs) -> CliResult<()> {
    let dataset = support::load(&args.dataset)?;
    let grid = support::parse_grid(&args.grid)?;
    for path in export_curves(&dataset, &args.indicator, &grid, &args.out_dir)? {
        println!("{}", path.display());
    }
    Ok(())
}

/// Parses the plain `key = value` run-config format; `#` starts a comment.
fn parse_run_config(path: &PathBuf) -> CliResult<HashMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: 3,
        message: format!("reading `{}`: {e}", path.display()),
    })?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(invalid(format!(
                "{}:{}: expected `key = value`, got `{raw}`",
                path.display(),
                lineno + 1
            )));
        };
        let key = key.trim().replace('-', "_");
        if !matches!(
            key.as_str(),
            "seed" | "ratio" | "trials" | "c1" | "samples" | "grid"
        ) {
            return Err(invalid(format!(
                "{}:{}: unknown config key `{key}`",
                path.display(),
                lineno + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn config_value<T: std::str::FromStr>(
    map: &HashMap<String, String>,
    key: &str,
) -> CliResult<Option<T>> {
    map.get(key)
        .map(|raw| {
            raw.parse()
                .map_err(|_| invalid(format!("bad config value for `{key}`: `{raw}`")))
        })
        .transpose()
}

fn csv_row(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn write_reports(outcome: &ProtocolOutcome, out_dir: &Path) -> CliResult<()> {
    let mut trials = String::from("trial,metric,srcc,krcc,auc_ca,d_mos\n");
    for trial in &outcome.trials {
        for (name, m) in &trial.per_metric {
            let _ = writeln!(
                trials,
                "{},{name},{}",
                trial.trial_index,
                csv_row(&[m.srcc, m.krcc, m.auc_ca, m.d_mos])
            );
        }
    }
    support::atomic_write(&out_dir.join("trials.csv"), &trials)?;

    let mut medians = String::from("metric,srcc,krcc,auc_ca,d_mos\n");
    for (name, m) in &outcome.medians {
        let _ = writeln!(
            medians,
            "{name},{}",
            csv_row(&[m.srcc, m.krcc, m.auc_ca, m.d_mos])
        );
    }
    support::atomic_write(&out_dir.join("medians.csv"), &medians)?;

    let mut disagreements = String::from("indicator,disagreements\n");
    for (name, count) in &outcome.disagreements {
        let _ = writeln!(disagreements, "{name},{count}");
    }
    support::atomic_write(&out_dir.join("disagreements.csv"), &disagreements)?;
    Ok(())
}

pub fn split_run(args: SplitRunArgs) -> CliResult<()> {
    let config_map = match &args.config {
        Some(path) => parse_run_config(path)?,
        None => HashMap::new(),
    };
    let spec = SplitSpec {
        train_ratio: match args.ratio {
            Some(r) => r,
            None => config_value(&config_map, "ratio")?.unwrap_or(0.8),
        },
        trials: match args.trials {
            Some(t) => t,
            None => config_value(&config_map, "trials")?.unwrap_or(1000),
        },
        seed: match args.seed {
            Some(s) => s,
            None => config_value(&config_map, "seed")?.unwrap_or(0),
        },
        unit: args.unit.to_split_unit(),
    };
    let indicator_config = IndicatorConfig {
        tie_policy: args.indicator.tie_policy(),
        c1: match args.indicator.c1 {
            Some(c) => Some(c),
            None => config_value(&config_map, "c1")?,
        },
        weights: args.indicator.weights(),
        auc_samples: match args.samples {
            Some(s) => s,
            None => config_value(&config_map, "samples")?.unwrap_or(101),
        },
    };
    let grid_spec = args
        .grid
        .clone()
        .or_else(|| config_map.get("grid").cloned())
        .unwrap_or_else(|| "0:100:20".to_string());
    let grid = support::parse_grid(&grid_spec)?;

    let dataset = support::load(&args.dataset)?;
    let outcome = match args.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| invalid(format!("thread pool: {e}")))?
            .install(|| run_protocol(&dataset, &spec, &indicator_config)),
        None => run_protocol(&dataset, &spec, &indicator_config),
    }?;

    support::ensure_dir(&args.out_dir)?;
    write_reports(&outcome, &args.out_dir)?;
    export_curves(&dataset, &args.indicator, &grid, &args.out_dir)?;

    if outcome.skipped_trials > 0 {
        eprintln!(
            "warning: {} trials skipped (test partitions below 2 items)",
            outcome.skipped_trials
        );
    }
    let rows: Vec<Vec<String>> = outcome
        .medians
        .iter()
        .map(|(name, m)| {
            let f = |v| support::fmt_value(v, args.porcelain);
            vec![name.clone(), f(m.srcc), f(m.krcc), f(m.auc_ca), f(m.d_mos)]
        })
        .collect();
    support::print_table(
        &["metric", "SRCC", "KRCC", "AUCca", "dMOS"],
        &rows,
        args.porcelain,
    );
    Ok(())
}
