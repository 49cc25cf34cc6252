//! Evaluation harness: seeded non-overlapping train/test splits, the
//! multi-trial protocol with median aggregation, synthetic opinion panels,
//! and per-metric indicator evaluation.
//!
//! Randomness comes from ChaCha8 seeded per trial as a pure function of
//! `(seed, trial_index)`, so serial and parallel runs produce identical
//! results and published seeds reproduce published splits.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::benchmark::{delta_mos, disagreement_count};
use crate::classic::{kendall_tau, spearman_rho};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::indicator::{
    auc_ca, sa_st_curve, threshold_range, uniform_grid, ActivationConfig, PwrcConfig, WeightScheme,
    DEFAULT_C1,
};
use crate::model::{ground_truth_pairing, normalize, PredictionSet, ScoreSet, TiePolicy};

/// What the train/test partition is drawn over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitUnit {
    /// Split on content groups, so no test item shares a group with any
    /// train item.
    #[default]
    ByGroup,
    /// Split on individual items (for databases without shared contents).
    ByItem,
}

/// Random split protocol parameters.
#[derive(Debug, Clone, Copy)]
pub struct SplitSpec {
    /// Fraction of units assigned to the training partition, in (0, 1).
    pub train_ratio: f64,
    pub trials: u32,
    pub seed: u64,
    pub unit: SplitUnit,
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.train_ratio > 0.0 && self.train_ratio < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "train ratio must be in (0, 1), got {}",
                self.train_ratio
            )));
        }
        if self.trials < 1 {
            return Err(Error::InvalidArgument("need at least 1 trial".into()));
        }
        Ok(())
    }
}

/// Indicator configuration for a protocol run.
#[derive(Debug, Clone, Copy)]
pub struct IndicatorConfig {
    pub tie_policy: TiePolicy,
    /// Activation steepness; `None` uses the cross-database default.
    pub c1: Option<f64>,
    pub weights: WeightScheme,
    /// Sample count of the AUC integration grid over [t_min, t_max].
    pub auc_samples: usize,
}

impl Default for IndicatorConfig {
    fn default() -> Self {
        Self {
            tie_policy: TiePolicy::Strict,
            c1: None,
            weights: WeightScheme::Perceptual,
            auc_samples: 101,
        }
    }
}

impl IndicatorConfig {
    pub fn effective_c1(&self) -> f64 {
        self.c1.unwrap_or(DEFAULT_C1)
    }
}

/// The four per-metric indicator values reported by the protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricIndicators {
    pub srcc: f64,
    pub krcc: f64,
    pub auc_ca: f64,
    pub d_mos: f64,
}

/// One trial's per-metric results.
#[derive(Debug, Clone)]
pub struct TrialResult {
    pub trial_index: u32,
    pub per_metric: Vec<(String, MetricIndicators)>,
}

/// Full protocol output.
#[derive(Debug, Clone)]
pub struct ProtocolOutcome {
    pub trials: Vec<TrialResult>,
    pub medians: Vec<(String, MetricIndicators)>,
    /// Disagreement count of each indicator's metric ranking against the
    /// ranking by median push accuracy.
    pub disagreements: Vec<(String, usize)>,
    /// Trials skipped because their test partition had fewer than 2 items.
    pub skipped_trials: u32,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn trial_rng(seed: u64, trial: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(trial as u64)))
}

/// Generates one non-overlapping `(train, test)` partition of `units` per
/// trial. Train size is `round(ratio * G)` clamped to `[1, G - 1]`.
pub fn generate_splits(
    units: &[String],
    spec: &SplitSpec,
) -> Result<Vec<(Vec<String>, Vec<String>)>> {
    spec.validate()?;
    let g = units.len();
    if g < 2 {
        return Err(Error::TooFewItems { needed: 2, got: g });
    }
    let train_count = ((spec.train_ratio * g as f64).round() as usize).clamp(1, g - 1);
    let mut out = Vec::with_capacity(spec.trials as usize);
    for trial in 0..spec.trials {
        let mut shuffled = units.to_vec();
        shuffled.shuffle(&mut trial_rng(spec.seed, trial));
        let mut train: Vec<String> = shuffled[..train_count].to_vec();
        let mut test: Vec<String> = shuffled[train_count..].to_vec();
        train.sort();
        test.sort();
        debug_assert!(train.iter().all(|u| !test.contains(u)));
        out.push((train, test));
    }
    Ok(out)
}

/// Evaluates one metric's SRCC/KRCC/AUC/push accuracy on a (sub)set of
/// scores. `pool` carries the database-level normalization constants;
/// `t_range` the database-level confidence bounds.
pub fn evaluate_metric(
    scores: &ScoreSet<f64>,
    prediction: &PredictionSet<f64>,
    pool: Option<&ScoreSet<f64>>,
    t_range: (f64, f64),
    config: &IndicatorConfig,
) -> Result<MetricIndicators> {
    let pairing = ground_truth_pairing(scores, prediction, pool, config.tie_policy)?;
    let srcc = spearman_rho(&pairing.ground_truth, &pairing.predicted)?;
    let krcc = kendall_tau(&pairing.ground_truth, &pairing.predicted)?;

    let (t_min, t_max) = t_range;
    let pwrc_config = PwrcConfig {
        activation: ActivationConfig::soft(config.effective_c1())?,
        weights: config.weights,
    };
    let grid = uniform_grid(t_min, t_max, config.auc_samples)?;
    let curve = sa_st_curve(
        &pairing.normalized,
        &pairing.ground_truth,
        &pairing.predicted,
        &grid,
        &pwrc_config,
    )?;
    let auc = auc_ca(&curve, t_min, t_max)?;
    let push = delta_mos(pairing.normalized.scores(), &pairing.predicted)?;

    Ok(MetricIndicators {
        srcc,
        krcc,
        auc_ca: auc,
        d_mos: push.mean,
    })
}

/// Database-level confidence bounds from the full score set.
pub fn dataset_threshold_range(scores: &ScoreSet<f64>) -> Result<(f64, f64)> {
    let normalized = normalize(scores, None)?;
    let (t_min, t_max) = threshold_range(normalized.stddevs())?;
    if t_min >= t_max {
        return Err(Error::DegenerateThresholdRange { t_min, t_max });
    }
    Ok((t_min, t_max))
}

/// Runs the multi-trial split protocol: per-trial indicators on the test
/// partition only, component-wise medians, and disagreement counts of each
/// indicator's metric ranking against the push-accuracy ranking.
pub fn run_protocol(
    dataset: &Dataset,
    spec: &SplitSpec,
    config: &IndicatorConfig,
) -> Result<ProtocolOutcome> {
    spec.validate()?;
    if dataset.metrics.is_empty() {
        return Err(Error::TooFewItems { needed: 1, got: 0 });
    }
    let t_range = dataset_threshold_range(&dataset.scores)?;

    let units: Vec<String> = match spec.unit {
        SplitUnit::ByGroup => dataset.scores.groups(),
        SplitUnit::ByItem => dataset.scores.ids().iter().map(|s| s.to_string()).collect(),
    };
    let splits = generate_splits(&units, spec)?;

    // Unit -> item indices, in subjective-file order.
    let mut unit_items: HashMap<&str, Vec<usize>> = HashMap::new();
    for (idx, item) in dataset.scores.items().iter().enumerate() {
        let key = match spec.unit {
            SplitUnit::ByGroup => item.group.as_str(),
            SplitUnit::ByItem => item.id.as_str(),
        };
        unit_items.entry(key).or_default().push(idx);
    }

    let maybe_trials: Vec<Option<TrialResult>> = splits
        .par_iter()
        .enumerate()
        .map(|(trial, (_train, test))| -> Result<Option<TrialResult>> {
            let mut keep: Vec<usize> = test
                .iter()
                .flat_map(|u| unit_items.get(u.as_str()).into_iter().flatten().copied())
                .collect();
            keep.sort_unstable();
            if keep.len() < 2 {
                log::warn!("trial {trial}: test partition has {} items, skipped", keep.len());
                return Ok(None);
            }
            let sub = dataset.subset(&keep)?;
            let per_metric = sub
                .metrics
                .iter()
                .map(|(name, pred)| {
                    Ok((
                        name.clone(),
                        evaluate_metric(&sub.scores, pred, Some(&dataset.scores), t_range, config)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Some(TrialResult {
                trial_index: trial as u32,
                per_metric,
            }))
        })
        .collect::<Result<_>>()?;

    let mut skipped = 0u32;
    let trials: Vec<TrialResult> = maybe_trials
        .into_iter()
        .filter_map(|t| {
            if t.is_none() {
                skipped += 1;
            }
            t
        })
        .collect();
    if trials.is_empty() {
        return Err(Error::InvalidArgument(
            "every trial was skipped (test partitions too small)".into(),
        ));
    }

    let metric_names: Vec<String> = dataset.metrics.iter().map(|(n, _)| n.clone()).collect();
    let medians: Vec<(String, MetricIndicators)> = metric_names
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let collect = |f: fn(&MetricIndicators) -> f64| {
                median(trials.iter().map(|t| f(&t.per_metric[k].1)).collect())
            };
            (
                name.clone(),
                MetricIndicators {
                    srcc: collect(|m| m.srcc),
                    krcc: collect(|m| m.krcc),
                    auc_ca: collect(|m| m.auc_ca),
                    d_mos: collect(|m| m.d_mos),
                },
            )
        })
        .collect();

    let benchmark_ranking = rank_metrics(&medians, |m| m.d_mos);
    let disagreements = [
        ("SRCC", rank_metrics(&medians, |m| m.srcc)),
        ("KRCC", rank_metrics(&medians, |m| m.krcc)),
        ("AUCca", rank_metrics(&medians, |m| m.auc_ca)),
    ]
    .into_iter()
    .map(|(name, ranking)| {
        Ok((
            name.to_string(),
            disagreement_count(&ranking, &benchmark_ranking)?,
        ))
    })
    .collect::<Result<Vec<_>>>()?;

    Ok(ProtocolOutcome {
        trials,
        medians,
        disagreements,
        skipped_trials: skipped,
    })
}

/// Metric names ordered best-first by the given median component. Ties fall
/// back to name order so rankings stay deterministic.
pub fn rank_metrics(
    medians: &[(String, MetricIndicators)],
    key: impl Fn(&MetricIndicators) -> f64,
) -> Vec<String> {
    let mut names: Vec<(&String, f64)> = medians.iter().map(|(n, m)| (n, key(m))).collect();
    names.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(b.0)));
    names.into_iter().map(|(n, _)| n.clone()).collect()
}

/// Median of a sample; the mean of the two middle values for even counts.
pub fn median(mut values: Vec<f64>) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// A simulated subjective study under the Gaussian opinion model.
#[derive(Debug, Clone)]
pub struct SyntheticPanel {
    pub true_scores: Vec<f64>,
    pub stddevs: Vec<f64>,
    /// Per image, the simulated subject scores.
    pub drawn_opinions: Vec<Vec<f64>>,
    /// Per-image mean of the draws.
    pub mos_estimates: Vec<f64>,
    /// Per-image sample standard deviation of the draws.
    pub stddev_estimates: Vec<f64>,
}

/// Draws `subjects_per_image` opinion scores per image from
/// `N(true_score, stddev)`, reproducibly for a fixed seed.
pub fn synthesize_panel(
    true_scores: &[f64],
    stddevs: &[f64],
    subjects_per_image: usize,
    seed: u64,
) -> Result<SyntheticPanel> {
    if true_scores.len() != stddevs.len() {
        return Err(Error::LengthMismatch {
            left: true_scores.len(),
            right: stddevs.len(),
        });
    }
    if subjects_per_image < 1 {
        return Err(Error::InvalidArgument(
            "need at least 1 subject per image".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut drawn = Vec::with_capacity(true_scores.len());
    let mut mos = Vec::with_capacity(true_scores.len());
    let mut sd = Vec::with_capacity(true_scores.len());
    for (&mean, &sigma) in true_scores.iter().zip(stddevs) {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "stddev must be finite and >= 0, got {sigma}"
            )));
        }
        let normal = Normal::new(mean, sigma)
            .map_err(|e| Error::InvalidArgument(format!("bad normal parameters: {e}")))?;
        let draws: Vec<f64> = (0..subjects_per_image)
            .map(|_| normal.sample(&mut rng))
            .collect();
        let m = draws.iter().sum::<f64>() / draws.len() as f64;
        let s = if draws.len() > 1 {
            (draws.iter().map(|d| (d - m).powi(2)).sum::<f64>() / (draws.len() - 1) as f64).sqrt()
        } else {
            0.0
        };
        drawn.push(draws);
        mos.push(m);
        sd.push(s);
    }
    Ok(SyntheticPanel {
        true_scores: true_scores.to_vec(),
        stddevs: stddevs.to_vec(),
        drawn_opinions: drawn,
        mos_estimates: mos,
        stddev_estimates: sd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Polarity, PredictionPolarity, ScoreItem};

    fn spec(ratio: f64, trials: u32, seed: u64) -> SplitSpec {
        SplitSpec {
            train_ratio: ratio,
            trials,
            seed,
            unit: SplitUnit::ByGroup,
        }
    }

    fn unit_names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("g{i:02}")).collect()
    }

    #[test]
    fn splits_are_partitions() {
        let groups = unit_names(10);
        let splits = generate_splits(&groups, &spec(0.8, 50, 7)).unwrap();
        for (train, test) in &splits {
            assert_eq!(train.len(), 8);
            assert_eq!(test.len(), 2);
            let mut all: Vec<&String> = train.iter().chain(test).collect();
            all.sort();
            assert_eq!(all.len(), 10);
            assert!(train.iter().all(|g| !test.contains(g)));
        }
    }

    #[test]
    fn splits_deterministic_for_seed() {
        let groups = unit_names(12);
        let a = generate_splits(&groups, &spec(0.5, 20, 42)).unwrap();
        let b = generate_splits(&groups, &spec(0.5, 20, 42)).unwrap();
        assert_eq!(a, b);
        let c = generate_splits(&groups, &spec(0.5, 20, 43)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn split_rounding_rule() {
        // round(0.5 * 29) = 15, clamped inside [1, 28].
        let groups = unit_names(29);
        let splits = generate_splits(&groups, &spec(0.5, 100, 1)).unwrap();
        for (train, _) in &splits {
            assert_eq!(train.len(), 15);
        }
    }

    fn toy_dataset() -> Dataset {
        let items = (0..10)
            .map(|i| ScoreItem {
                id: format!("img{i}"),
                score: 5.0 + 7.3 * i as f64,
                stddev: 2.0 + 0.3 * (i % 4) as f64,
                group: format!("g{}", i / 2),
            })
            .collect();
        let scores = ScoreSet::new(items, Polarity::Mos).unwrap();
        let ids: Vec<String> = scores.ids().iter().map(|s| s.to_string()).collect();
        let perfect = PredictionSet::new(
            ids.clone(),
            scores.scores().iter().map(|s| s * 0.5).collect(),
            PredictionPolarity::HigherIsBetter,
        )
        .unwrap();
        let reversed = PredictionSet::new(
            ids,
            scores.scores().iter().map(|s| -s).collect(),
            PredictionPolarity::HigherIsBetter,
        )
        .unwrap();
        Dataset {
            scores,
            metrics: vec![("good".into(), perfect), ("bad".into(), reversed)],
        }
    }

    #[test]
    fn protocol_perfect_vs_reversed() {
        let dataset = toy_dataset();
        let outcome = run_protocol(
            &dataset,
            &spec(0.5, 10, 99),
            &IndicatorConfig::default(),
        )
        .unwrap();
        assert_eq!(outcome.skipped_trials, 0);
        let good = &outcome.medians[0].1;
        let bad = &outcome.medians[1].1;
        assert!((good.srcc - 1.0).abs() < 1e-12);
        assert!((good.krcc - 1.0).abs() < 1e-12);
        assert!(good.auc_ca > 0.0);
        assert!(good.d_mos > 0.0);
        assert!((bad.srcc + 1.0).abs() < 1e-12);
        assert!(bad.d_mos < 0.0);
        for (_, count) in &outcome.disagreements {
            assert_eq!(*count, 0);
        }
    }

    #[test]
    fn protocol_deterministic() {
        let dataset = toy_dataset();
        let cfg = IndicatorConfig::default();
        let a = run_protocol(&dataset, &spec(0.8, 25, 5), &cfg).unwrap();
        let b = run_protocol(&dataset, &spec(0.8, 25, 5), &cfg).unwrap();
        for (x, y) in a.medians.iter().zip(&b.medians) {
            assert_eq!(x.0, y.0);
            assert_eq!(x.1, y.1);
        }
    }

    #[test]
    fn panel_zero_stddev_and_determinism() {
        let truth = [10.0, 20.0, 30.0];
        let zeros = [0.0; 3];
        let panel = synthesize_panel(&truth, &zeros, 5, 1).unwrap();
        for (draws, &t) in panel.drawn_opinions.iter().zip(&truth) {
            assert!(draws.iter().all(|&d| d == t));
        }
        let a = synthesize_panel(&truth, &[1.0, 2.0, 3.0], 8, 77).unwrap();
        let b = synthesize_panel(&truth, &[1.0, 2.0, 3.0], 8, 77).unwrap();
        assert_eq!(a.drawn_opinions, b.drawn_opinions);
    }

    #[test]
    fn panel_large_sample_stddev() {
        let panel = synthesize_panel(&[50.0], &[8.577], 10_000, 3).unwrap();
        let rel = (panel.stddev_estimates[0] - 8.577).abs() / 8.577;
        assert!(rel < 0.02, "relative error {rel}");
    }

    #[test]
    fn median_even_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
