//! The `synth` verb: exhaustive permutation tables for small synthetic score
//! sets, and simulated opinion panels under the Gaussian model.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use pwrc::classic::{kendall_tau, mistaken_pair_count, spearman_rho};
use pwrc::harness::synthesize_panel;
use pwrc::indicator::{pwrc as sorting_accuracy, ActivationConfig, PwrcConfig, WeightScheme};
use pwrc::model::{normalize, Polarity, RankVector, ScoreItem, ScoreSet};

use pwrc::benchmark::delta_mos;

use crate::support::{self, invalid, CliResult};

#[derive(Args)]
pub struct SynthArgs {
    /// Comma-separated true subjective scores.
    #[arg(long)]
    pub scores: String,
    /// Expected item count; checked against `--scores` when given.
    #[arg(long)]
    pub n: Option<usize>,
    /// Tabulate SRCC/KRCC/PWRC/dMOS over every permutation of the scores.
    #[arg(long)]
    pub enumerate_permutations: bool,
    /// Comma-separated opinion stddevs (panel mode).
    #[arg(long)]
    pub stddevs: Option<String>,
    /// Simulated subjects per image (panel mode).
    #[arg(long)]
    pub subjects: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Subjective-score CSV to write in panel mode; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Images per content group in the generated CSV.
    #[arg(long, default_value_t = 1)]
    pub group_size: usize,
    #[arg(long)]
    pub porcelain: bool,
}

fn parse_list(raw: &str, what: &str) -> CliResult<Vec<f64>> {
    raw.split(',')
        .map(|cell| {
            cell.trim()
                .parse()
                .map_err(|_| invalid(format!("bad {what} entry `{cell}`")))
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn recurse(prefix: &mut Vec<usize>, remaining: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..remaining.len() {
            let v = remaining.remove(k);
            prefix.push(v);
            recurse(prefix, remaining, out);
            prefix.pop();
            remaining.insert(k, v);
        }
    }
    let mut out = Vec::new();
    recurse(&mut Vec::new(), &mut (1..=n).collect(), &mut out);
    out
}

/// Prints the exhaustive comparison table: for every predicted ranking of
/// the given scores, the mistaken-pair count, both classic coefficients, the
/// indicator at T = 0 with the activation pinned to 1, and the mean score
/// gap.
fn enumerate(scores: &[f64], porcelain: bool) -> CliResult<()> {
    let n = scores.len();
    if !(2..=8).contains(&n) {
        return Err(invalid(format!(
            "permutation enumeration supports 2..=8 scores, got {n}"
        )));
    }
    let items = scores
        .iter()
        .enumerate()
        .map(|(i, &s)| ScoreItem {
            id: format!("img{i}"),
            score: s,
            stddev: 1.0,
            group: format!("g{i}"),
        })
        .collect();
    let set = ScoreSet::new(items, Polarity::Mos)?;
    let normalized = normalize(&set, None)?;
    let p = RankVector::<f64>::canonical(n);
    let config = PwrcConfig {
        activation: ActivationConfig::constant(),
        weights: WeightScheme::Perceptual,
    };

    let mut rows = Vec::new();
    for perm in permutations(n) {
        let q = RankVector::from_permutation(perm.clone())?;
        let s = sorting_accuracy(&normalized, &p, &q, 0.0, &config)?;
        let f = |v| support::fmt_value(v, porcelain);
        rows.push(vec![
            perm.iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join("-"),
            mistaken_pair_count(&p, &q)?.to_string(),
            f(spearman_rho(&p, &q)?),
            f(kendall_tau(&p, &q)?),
            f(s),
            f(delta_mos(scores, &q)?.mean),
        ]);
    }
    support::print_table(
        &["perm", "L", "SRCC", "KRCC", "PWRC", "dMOS"],
        &rows,
        porcelain,
    );
    Ok(())
}

/// Draws a simulated panel and emits it in the subjective-score CSV format.
fn panel(args: &SynthArgs, true_scores: &[f64]) -> CliResult<()> {
    let stddevs = parse_list(
        args.stddevs
            .as_deref()
            .ok_or_else(|| invalid("panel mode needs --stddevs"))?,
        "stddev",
    )?;
    let subjects = args
        .subjects
        .ok_or_else(|| invalid("panel mode needs --subjects"))?;
    let seed = args.seed.ok_or_else(|| invalid("panel mode needs --seed"))?;
    if args.group_size < 1 {
        return Err(invalid("--group-size must be >= 1"));
    }
    let result = synthesize_panel(true_scores, &stddevs, subjects, seed)?;

    let mut csv = String::from("id,score,stddev,group,polarity\n");
    for (i, (mos, sd)) in result
        .mos_estimates
        .iter()
        .zip(&result.stddev_estimates)
        .enumerate()
    {
        let _ = writeln!(csv, "img{i:03},{mos},{sd},g{:03},mos", i / args.group_size);
    }
    match &args.out {
        Some(path) => {
            support::atomic_write(path, &csv)?;
            println!("{}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

pub fn run(args: SynthArgs) -> CliResult<()> {
    let scores = parse_list(&args.scores, "score")?;
    if let Some(n) = args.n {
        if n != scores.len() {
            return Err(invalid(format!(
                "--n {n} does not match {} scores",
                scores.len()
            )));
        }
    }
    if args.enumerate_permutations {
        enumerate(&scores, args.porcelain)
    } else {
        panel(&args, &scores)
    }
}
