//! Acceptance suite: one test per release criterion, each printing a PASS
//! line when its checks hold at the stated tolerance. Criterion 10 (split
//! protocol determinism through the binary) lives in the CLI crate's tests.

mod common;

use std::collections::BTreeMap;

use common::{normalized, permutations, rank, synthetic_scores};
use pwrc::benchmark::delta_mos;
use pwrc::classic::{
    generalized_gamma, kendall_tau, mistaken_pair_count, spearman_rho, spearman_rho_general,
    PairwiseCorrelates,
};
use pwrc::indicator::{
    activation, auc_ca, derive_c1, importance_weights, pwrc, sa_st_curve, uniform_grid,
    ActivationConfig, ActivationMode, PwrcConfig, SaStCurve, WeightScheme,
};
use pwrc::model::{rank_transform, RankVector, TiePolicy};

const RAW_5: [f64; 5] = [5.0, 10.0, 20.0, 35.0, 55.0];

fn constant_perceptual() -> PwrcConfig<f64> {
    PwrcConfig {
        activation: ActivationConfig::constant(),
        weights: WeightScheme::Perceptual,
    }
}

/// Spearman correlation between two equal-length value series, mid-ranking
/// exact ties.
fn series_spearman(a: &[f64], b: &[f64]) -> f64 {
    let ra = rank_transform(a, TiePolicy::Average).unwrap();
    let rb = rank_transform(b, TiePolicy::Average).unwrap();
    spearman_rho(&ra, &rb).unwrap()
}

#[test]
fn criterion_01_steepness_from_mean_stddev() {
    let c1 = derive_c1(8.577f64).unwrap();
    assert!(
        (c1 - 0.175).abs() <= 0.0005,
        "C1 from mean stddev 8.577 was {c1}, expected 0.175 +- 0.0005"
    );
    println!("criterion 1 PASS: C1(8.577) = {c1:.6}, within 0.0005 of 0.175");
}

#[test]
fn criterion_02_uniform_constant_reduces_to_kendall() {
    let mut worst = 0.0f64;
    let cfg = PwrcConfig {
        activation: ActivationConfig::constant(),
        weights: WeightScheme::Uniform,
    };
    for n in [5usize, 6] {
        let x = normalized(&synthetic_scores(n));
        let p = RankVector::<f64>::canonical(n);
        for perm in permutations(n) {
            let q = rank(&perm);
            let s = pwrc(&x, &p, &q, 0.0, &cfg).unwrap();
            let tau = kendall_tau(&p, &q).unwrap();
            worst = worst.max((s - tau).abs());
        }
    }
    assert!(
        worst <= 1e-12,
        "uniform/constant indicator deviated from tau by {worst:e}"
    );
    println!("criterion 2 PASS: tau reduction over all n=5,6 permutations, max gap {worst:.2e}");
}

#[test]
fn criterion_03_generalized_coefficient_specializations() {
    let mut worst_rho = 0.0f64;
    for n in 2..=6usize {
        let p = RankVector::<f64>::canonical(n);
        for perm in permutations(n) {
            let q = rank(&perm);
            let fast = spearman_rho(&p, &q).unwrap();
            let general = spearman_rho_general(&p, &q).unwrap();
            worst_rho = worst_rho.max((fast - general).abs());
        }
    }
    assert!(worst_rho <= 1e-12, "rho forms disagreed by {worst_rho:e}");

    let mut worst_inst = 0.0f64;
    for n in 2..=5usize {
        let p = RankVector::<f64>::canonical(n);
        for perm in permutations(n) {
            let q = rank(&perm);
            let diff = PairwiseCorrelates::from_rank_differences(&p, &q).unwrap();
            let gap = (generalized_gamma(&diff).unwrap() - spearman_rho(&p, &q).unwrap()).abs();
            worst_inst = worst_inst.max(gap);
            let signs = PairwiseCorrelates::from_rank_signs(&p, &q).unwrap();
            let gap = (generalized_gamma(&signs).unwrap() - kendall_tau(&p, &q).unwrap()).abs();
            worst_inst = worst_inst.max(gap);
        }
    }
    assert!(
        worst_inst <= 1e-12,
        "gamma instantiations deviated by {worst_inst:e}"
    );
    println!(
        "criterion 3 PASS: closed-form vs general rho gap {worst_rho:.2e} (n<=6), \
         gamma instantiation gap {worst_inst:.2e} (n<=5)"
    );
}

#[test]
fn criterion_04_bounded_and_weights_sum_to_one() {
    let grid = uniform_grid(0.0, 100.0, 20).unwrap();
    let mut worst_total = 0.0f64;
    let mut max_abs = 0.0f64;
    for n in 2..=5usize {
        let x = normalized(&synthetic_scores(n));
        let p = RankVector::<f64>::canonical(n);
        for perm in permutations(n) {
            let q = rank(&perm);
            let w = importance_weights(&p, &q).unwrap();
            worst_total = worst_total.max((w.total() - 1.0).abs());
            for c1 in [0.05, 0.175, 1.0] {
                let cfg = PwrcConfig {
                    activation: ActivationConfig::soft(c1).unwrap(),
                    weights: WeightScheme::Perceptual,
                };
                for &t in &grid {
                    let s = pwrc(&x, &p, &q, t, &cfg).unwrap();
                    max_abs = max_abs.max(s.abs());
                }
            }
        }
    }
    assert!(
        worst_total <= 1e-12,
        "importance weights summed to 1 +- {worst_total:e}"
    );
    assert!(max_abs <= 1.0 + 1e-12, "|S| reached {max_abs}");
    println!(
        "criterion 4 PASS: |S| <= 1 (max {max_abs:.6}) and sum(M) = 1 \
         (max gap {worst_total:.2e}) over n<=5 x 20-point grid x 3 steepness values"
    );
}

#[test]
fn criterion_05_finer_granularity_than_classic_coefficients() {
    let n = 5usize;
    let p = RankVector::<f64>::canonical(n);
    let x = normalized(&RAW_5);
    let cfg = constant_perceptual();

    let mut srcc = Vec::new();
    let mut krcc = Vec::new();
    let mut pwrc_vals = Vec::new();
    let mut dmos = Vec::new();
    let mut mistakes = Vec::new();
    for perm in permutations(n) {
        let q = rank(&perm);
        srcc.push(spearman_rho(&p, &q).unwrap());
        krcc.push(kendall_tau(&p, &q).unwrap());
        pwrc_vals.push(pwrc(&x, &p, &q, 0.0, &cfg).unwrap());
        dmos.push(delta_mos(&RAW_5, &q).unwrap().mean);
        mistakes.push(mistaken_pair_count(&p, &q).unwrap());
    }

    // (a) The mistaken-pair count determines KRCC exactly...
    let mut krcc_by_l: BTreeMap<usize, f64> = BTreeMap::new();
    for (&l, &t) in mistakes.iter().zip(&krcc) {
        let entry = krcc_by_l.entry(l).or_insert(t);
        assert!(
            (*entry - t).abs() <= 1e-12,
            "KRCC varies within the L = {l} class"
        );
    }
    // ...while classes of identical (SRCC, KRCC) still hide distinct
    // push-accuracy outcomes.
    let mut dmos_by_class: BTreeMap<(i64, i64), (f64, f64)> = BTreeMap::new();
    for i in 0..srcc.len() {
        let key = (
            (srcc[i] * 120.0).round() as i64,
            (krcc[i] * 10.0).round() as i64,
        );
        let entry = dmos_by_class.entry(key).or_insert((dmos[i], dmos[i]));
        entry.0 = entry.0.min(dmos[i]);
        entry.1 = entry.1.max(dmos[i]);
    }
    let varying = dmos_by_class
        .values()
        .filter(|(lo, hi)| hi - lo > 1e-9)
        .count();
    assert_eq!(dmos_by_class.len(), 25);
    assert_eq!(
        varying, 23,
        "expected 23 of 25 coefficient classes to hide distinct mean score gaps"
    );

    // (b) The indicator orders permutations closer to the push-accuracy
    // benchmark than either classic coefficient does.
    let corr_pwrc = series_spearman(&pwrc_vals, &dmos);
    let corr_srcc = series_spearman(&srcc, &dmos);
    let corr_krcc = series_spearman(&krcc, &dmos);
    assert!((corr_pwrc - 0.9862).abs() < 1e-3, "pwrc corr {corr_pwrc}");
    assert!((corr_srcc - 0.9691).abs() < 1e-3, "srcc corr {corr_srcc}");
    assert!((corr_krcc - 0.9507).abs() < 1e-3, "krcc corr {corr_krcc}");
    assert!(corr_pwrc > corr_srcc && corr_srcc > corr_krcc);
    println!(
        "criterion 5 PASS: 23/25 coefficient classes hide distinct mean score gaps; \
         rank agreement with the benchmark: indicator {corr_pwrc:.4} > \
         SRCC {corr_srcc:.4} > KRCC {corr_krcc:.4}"
    );
}

#[test]
fn criterion_06_top_mistakes_cost_more() {
    let cfg = constant_perceptual();
    for n in 3..=8usize {
        let x = normalized(&synthetic_scores(n));
        let p = RankVector::<f64>::canonical(n);
        let mut top_swap: Vec<usize> = (1..=n).collect();
        top_swap.swap(n - 2, n - 1);
        let mut bottom_swap: Vec<usize> = (1..=n).collect();
        bottom_swap.swap(0, 1);
        let s_top = pwrc(&x, &p, &rank(&top_swap), 0.0, &cfg).unwrap();
        let s_bottom = pwrc(&x, &p, &rank(&bottom_swap), 0.0, &cfg).unwrap();
        assert!(
            s_top < s_bottom,
            "n = {n}: top swap {s_top} should score below bottom swap {s_bottom}"
        );
    }
    println!("criterion 6 PASS: swapping the best pair costs more than the worst pair, n = 3..8");
}

#[test]
fn criterion_07_curves_can_cross() {
    let n = 5usize;
    let x = normalized(&RAW_5);
    let p = RankVector::<f64>::canonical(n);
    let cfg = PwrcConfig::<f64>::default();
    let grid = uniform_grid(0.0, 100.0, 20).unwrap();

    let curves: Vec<Vec<f64>> = permutations(n)
        .iter()
        .map(|perm| {
            sa_st_curve(&x, &p, &rank(perm), &grid, &cfg)
                .unwrap()
                .accuracies()
                .to_vec()
        })
        .collect();
    let crosses = |a: &[f64], b: &[f64]| {
        let margin = 1e-9;
        let mut saw_pos = false;
        let mut saw_neg = false;
        for (&sa, &sb) in a.iter().zip(b) {
            saw_pos |= sa - sb > margin;
            saw_neg |= sb - sa > margin;
        }
        saw_pos && saw_neg
    };

    // A known witness: two single-swap mistakes trading places as the
    // threshold sweeps up.
    let perms = permutations(n);
    let w1 = perms.iter().position(|p| p == &[1, 2, 3, 5, 4]).unwrap();
    let w2 = perms.iter().position(|p| p == &[1, 2, 4, 3, 5]).unwrap();
    assert!(crosses(&curves[w1], &curves[w2]), "witness pair no longer crosses");

    let mut found = 0usize;
    for i in 0..curves.len() {
        for j in (i + 1)..curves.len() {
            if crosses(&curves[i], &curves[j]) {
                found += 1;
            }
        }
    }
    assert!(found > 0);
    println!(
        "criterion 7 PASS: {found} crossing curve pairs among all n=5 permutations \
         (20-point grid, default steepness)"
    );
}

#[test]
fn criterion_08_trapezoid_matches_closed_forms() {
    let grid = uniform_grid(0.0, 100.0, 101).unwrap();
    let flat: SaStCurve<f64> = SaStCurve::new(grid.clone(), vec![0.625; 101], 0.175).unwrap();
    let gap_flat = (auc_ca(&flat, 7.0, 93.0).unwrap() - 0.625 * 86.0).abs();
    assert!(gap_flat <= 1e-9, "constant-curve quadrature off by {gap_flat:e}");

    let linear: Vec<f64> = grid.iter().map(|t| 0.9 - 0.013 * t).collect();
    let curve = SaStCurve::new(grid, linear, 0.175).unwrap();
    // Integral of 0.9 - 0.013 t over [a, b].
    let exact = |a: f64, b: f64| 0.9 * (b - a) - 0.013 / 2.0 * (b * b - a * a);
    let gap_lin = (auc_ca(&curve, 4.5, 88.5).unwrap() - exact(4.5, 88.5)).abs();
    assert!(gap_lin <= 1e-9, "linear-curve quadrature off by {gap_lin:e}");
    println!(
        "criterion 8 PASS: 101-sample trapezoid reproduces constant ({gap_flat:.2e}) \
         and linear ({gap_lin:.2e}) closed forms"
    );
}

#[test]
fn criterion_09_activation_anchors() {
    for sigma in [8.577f64, 5.0, 15.0] {
        let cfg = ActivationConfig::soft(derive_c1(sigma).unwrap()).unwrap();
        assert_eq!(cfg.mode, ActivationMode::Soft);
        for t in [0.0, 10.0, 35.0] {
            // Gap equal to the threshold sits at the sigmoid midpoint.
            let mid = activation(60.0 + t, 60.0, t, &cfg);
            assert!((mid - 0.5).abs() <= 1e-12);
            // Two mean stddevs past the threshold clears 95% confidence.
            let high = activation(60.0 + t + 2.0 * sigma, 60.0, t, &cfg);
            assert!(
                (high - 0.95).abs() <= 0.005,
                "sigma {sigma}, T {t}: activation {high}"
            );
        }
    }
    println!(
        "criterion 9 PASS: A = 0.5 at gap = T and A = 0.95 +- 0.005 at gap = T + 2 sigma \
         for sigma in {{8.577, 5, 15}}"
    );
}

#[test]
fn criterion_11_push_accuracy_extremes() {
    let perfect = RankVector::<f64>::canonical(5);
    let reversed = rank(&[5, 4, 3, 2, 1]);
    let best = delta_mos(&RAW_5, &perfect).unwrap().mean;
    let worst = delta_mos(&RAW_5, &reversed).unwrap().mean;
    assert!((best - 31.25).abs() <= 1e-12, "perfect ranking gave {best}");
    assert!((worst + 31.25).abs() <= 1e-12, "reversed ranking gave {worst}");
    println!("criterion 11 PASS: mean score gap +31.25 / -31.25 at the ranking extremes");
}
