//! Standard-output verbs: `eval`, `auc`, and `compare`.

use clap::Args;
use pwrc::benchmark::disagreement_count;
use pwrc::harness::{evaluate_metric, rank_metrics, IndicatorConfig, MetricIndicators};
use pwrc::indicator::pwrc as sorting_accuracy;
use pwrc::model::ground_truth_pairing;

use crate::support::{self, invalid, CliResult};
use crate::{DatasetArgs, IndicatorArgs, RangeArgs};

#[derive(Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub indicator: IndicatorArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    /// Sensory threshold for the PWRC column.
    #[arg(long, default_value_t = 0.0)]
    pub threshold: f64,
    /// Machine-readable TSV output.
    #[arg(long)]
    pub porcelain: bool,
}

#[derive(Args)]
pub struct AucArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub indicator: IndicatorArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long)]
    pub porcelain: bool,
}

#[derive(Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub indicator: IndicatorArgs,
    #[command(flatten)]
    pub range: RangeArgs,
    #[arg(long)]
    pub porcelain: bool,
}

fn evaluate_all(
    dataset: &pwrc::dataset::Dataset,
    indicator_args: &IndicatorArgs,
    range: &RangeArgs,
    t_range: (f64, f64),
) -> CliResult<Vec<(String, MetricIndicators)>> {
    let config = IndicatorConfig {
        tie_policy: indicator_args.tie_policy(),
        c1: indicator_args.c1,
        weights: indicator_args.weights(),
        auc_samples: range.samples,
    };
    dataset
        .metrics
        .iter()
        .map(|(name, pred)| {
            let mi = evaluate_metric(&dataset.scores, pred, None, t_range, &config)?;
            Ok((name.clone(), mi))
        })
        .collect()
}

pub fn eval(args: EvalArgs) -> CliResult<()> {
    if args.threshold < 0.0 {
        return Err(invalid(format!(
            "threshold must be >= 0, got {}",
            args.threshold
        )));
    }
    let dataset = support::load(&args.dataset)?;
    let t_range = support::resolve_range(&dataset.scores, &args.range)?;
    let harness_config = IndicatorConfig {
        tie_policy: args.indicator.tie_policy(),
        c1: args.indicator.c1,
        weights: args.indicator.weights(),
        auc_samples: args.range.samples,
    };
    let pwrc_config = args.indicator.pwrc_config()?;

    let mut rows = Vec::new();
    for (name, pred) in &dataset.metrics {
        let mi = evaluate_metric(&dataset.scores, pred, None, t_range, &harness_config)?;
        let pairing = ground_truth_pairing(
            &dataset.scores,
            pred,
            None,
            args.indicator.tie_policy(),
        )?;
        let s = sorting_accuracy(
            &pairing.normalized,
            &pairing.ground_truth,
            &pairing.predicted,
            args.threshold,
            &pwrc_config,
        )?;
        let f = |v| support::fmt_value(v, args.porcelain);
        rows.push(vec![
            name.clone(),
            f(mi.srcc),
            f(mi.krcc),
            f(s),
            f(mi.auc_ca),
            f(mi.d_mos),
        ]);
    }
    support::print_table(
        &["metric", "SRCC", "KRCC", "PWRC", "AUCca", "dMOS"],
        &rows,
        args.porcelain,
    );
    Ok(())
}

pub fn auc(args: AucArgs) -> CliResult<()> {
    let dataset = support::load(&args.dataset)?;
    let t_range = support::resolve_range(&dataset.scores, &args.range)?;
    let results = evaluate_all(&dataset, &args.indicator, &args.range, t_range)?;
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|(name, mi)| {
            vec![
                name.clone(),
                support::fmt_value(mi.auc_ca, args.porcelain),
                support::fmt_value(t_range.0, args.porcelain),
                support::fmt_value(t_range.1, args.porcelain),
            ]
        })
        .collect();
    support::print_table(&["metric", "AUCca", "t_min", "t_max"], &rows, args.porcelain);
    Ok(())
}

pub fn compare(args: CompareArgs) -> CliResult<()> {
    let dataset = support::load(&args.dataset)?;
    let t_range = support::resolve_range(&dataset.scores, &args.range)?;
    let results = evaluate_all(&dataset, &args.indicator, &args.range, t_range)?;
    let benchmark = rank_metrics(&results, |m| m.d_mos);
    let mut rows = Vec::new();
    for (label, key) in [
        ("SRCC", (|m: &MetricIndicators| m.srcc) as fn(&MetricIndicators) -> f64),
        ("KRCC", |m| m.krcc),
        ("AUCca", |m| m.auc_ca),
    ] {
        let ranking = rank_metrics(&results, key);
        let count = disagreement_count(&ranking, &benchmark)?;
        rows.push(vec![
            label.to_string(),
            count.to_string(),
            ranking.join(" "),
        ]);
    }
    rows.push(vec![
        "dMOS".to_string(),
        "0".to_string(),
        benchmark.join(" "),
    ]);
    support::print_table(
        &["indicator", "disagreements", "ranking (best first)"],
        &rows,
        args.porcelain,
    );
    Ok(())
}
