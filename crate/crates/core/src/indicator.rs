//! The perceptually weighted rank correlation indicator.
//!
//! The sorting accuracy at sensory threshold `T` combines three factors over
//! all ordered item pairs (i, j), i != j:
//!
//! ```text
//! S(x, y, T) = sum A(|x_i - x_j|, T) * D(p, q) * M(p, q)
//! ```
//!
//! * `A` is a sigmoid activation gating perceptually meaningful score gaps,
//! * `D` is the +/-1 concordance sign,
//! * `M` is an importance weight favoring mistakes at high quality levels
//!   and large rank deviations, normalized to sum to 1 over ordered pairs.
//!
//! All three factors are symmetric in (i, j), so each unordered pair
//! contributes twice with `M` normalized over ordered pairs; the sum is
//! implemented literally over ordered pairs. Sampling `S` over a threshold
//! grid yields the SA-ST curve; integrating the curve over
//! `[2 * min sigma, 2 * max sigma]` yields the confidence-aware AUC.

use crate::error::{Error, Result};
use crate::model::{NormalizedScoreSet, RankVector};
use crate::scalar::Real;

/// Cross-database default steepness: 3 / (2 * 8.577), with 8.577 the
/// cross-database mean normalized opinion stddev, rounded to three digits.
pub const DEFAULT_C1: f64 = 0.175;

/// Activation shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ActivationMode {
    /// Sigmoid of the score gap minus the threshold.
    #[default]
    Soft,
    /// Always 1; reduces the indicator to a weighted sign sum.
    Constant1,
}

/// Activation settings: steepness and shape.
#[derive(Debug, Clone, Copy)]
pub struct ActivationConfig<R> {
    pub c1: R,
    pub mode: ActivationMode,
}

impl<R: Real> ActivationConfig<R> {
    pub fn soft(c1: R) -> Result<Self> {
        if !(c1.is_finite() && c1 > R::zero()) {
            return Err(Error::InvalidArgument(format!(
                "activation steepness must be finite and positive, got {c1}"
            )));
        }
        Ok(Self {
            c1,
            mode: ActivationMode::Soft,
        })
    }

    pub fn constant() -> Self {
        Self {
            c1: R::c(DEFAULT_C1),
            mode: ActivationMode::Constant1,
        }
    }
}

impl<R: Real> Default for ActivationConfig<R> {
    fn default() -> Self {
        Self {
            c1: R::c(DEFAULT_C1),
            mode: ActivationMode::Soft,
        }
    }
}

/// Pair weighting scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightScheme {
    /// The perceptual importance weights.
    #[default]
    Perceptual,
    /// Uniform weights, `2/(n^2 - n)` per unordered pair (so `1/(n^2 - n)`
    /// per ordered pair, keeping the total at 1); with `Constant1`
    /// activation this reduces the indicator to Kendall's tau exactly.
    Uniform,
}

/// Full indicator configuration.
#[derive(Debug, Clone, Copy)]
pub struct PwrcConfig<R> {
    pub activation: ActivationConfig<R>,
    pub weights: WeightScheme,
}

impl<R: Real> Default for PwrcConfig<R> {
    fn default() -> Self {
        Self {
            activation: ActivationConfig::default(),
            weights: WeightScheme::default(),
        }
    }
}

/// Derives the activation steepness from the mean normalized stddev:
/// `C1 = 3 / (2 * sigma)`, the closed-form approximation of solving
/// `1/(1 + exp(-C1 * 2 * sigma)) = 0.95` (the exact solution would use
/// `ln(19) ~= 2.944` in place of 3).
pub fn derive_c1<R: Real>(mean_normalized_stddev: R) -> Result<R> {
    if !(mean_normalized_stddev.is_finite() && mean_normalized_stddev > R::zero()) {
        return Err(Error::InvalidArgument(format!(
            "mean normalized stddev must be positive, got {mean_normalized_stddev}"
        )));
    }
    Ok(R::c(3.0) / (R::c(2.0) * mean_normalized_stddev))
}

/// Activation of the comparison between two normalized scores at threshold
/// `T`: a sigmoid of `|x_i - x_j| - T`, or exactly 1 in `Constant1` mode.
pub fn activation<R: Real>(xi: R, xj: R, threshold: R, config: &ActivationConfig<R>) -> R {
    match config.mode {
        ActivationMode::Constant1 => R::one(),
        ActivationMode::Soft => {
            let gap = (xi - xj).abs();
            R::one() / (R::one() + (-config.c1 * (gap - threshold)).exp())
        }
    }
}

/// Concordance sign of a rank pair: +1 when (p_i, p_j) and (q_i, q_j) are
/// ordered the same way, -1 when discordant. Equal ranks are an error.
pub fn detection<R: Real>(pi: R, pj: R, qi: R, qj: R) -> Result<R> {
    if pi == pj || qi == qj {
        return Err(Error::TiedValues(
            "detection needs strictly ordered rank pairs".into(),
        ));
    }
    if ((pi - pj) > R::zero()) == ((qi - qj) > R::zero()) {
        Ok(R::one())
    } else {
        Ok(-R::one())
    }
}

/// Importance weights over ordered pairs, with the raw deviation and level
/// terms kept for inspection. Row-major n*n storage, zero diagonal.
#[derive(Debug, Clone)]
pub struct ImportanceWeights<R> {
    n: usize,
    w: Vec<R>,
    d_term: Vec<R>,
    l_term: Vec<R>,
}

impl<R: Real> ImportanceWeights<R> {
    /// Weight of the ordered pair (i, j), zero-based indices.
    pub fn weight(&self, i: usize, j: usize) -> R {
        self.w[i * self.n + j]
    }

    /// Normalized rank deviation term of the pair.
    pub fn d_term(&self, i: usize, j: usize) -> R {
        self.d_term[i * self.n + j]
    }

    /// Normalized rank level term of the pair.
    pub fn l_term(&self, i: usize, j: usize) -> R {
        self.l_term[i * self.n + j]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sum over all ordered pairs; 1 up to rounding.
    pub fn total(&self) -> R {
        self.w.iter().copied().sum()
    }
}

/// Computes the importance weights for canonical ground truth `p = 1..n`:
///
/// ```text
/// d_ij = (|i - q_i| + |j - q_j|) / (2n - 2)
/// l_ij = (max(i, j) - 1) / (n - 1)
/// M_ij = (exp(d_ij) + exp(l_ij) - 2) / sum over ordered pairs
/// ```
pub fn importance_weights<R: Real>(
    p: &RankVector<R>,
    q: &RankVector<R>,
) -> Result<ImportanceWeights<R>> {
    let n = p.len();
    if n < 2 {
        return Err(Error::TooFewItems { needed: 2, got: n });
    }
    if q.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: q.len(),
        });
    }
    if !p.is_canonical() {
        return Err(Error::NonCanonicalRanks);
    }
    if q.has_ties() {
        return Err(Error::TiedValues("importance weights need untied q".into()));
    }

    let qr = q.ranks();
    let nf = R::of_usize(n);
    let two = R::c(2.0);
    let dev_denom = two * nf - two;
    let lvl_denom = nf - R::one();

    let mut d_term = vec![R::zero(); n * n];
    let mut l_term = vec![R::zero(); n * n];
    let mut raw = vec![R::zero(); n * n];
    let mut total = R::zero();
    for i in 0..n {
        let pi = R::of_usize(i + 1);
        for j in 0..n {
            if i == j {
                continue;
            }
            let pj = R::of_usize(j + 1);
            let d = ((pi - qr[i]).abs() + (pj - qr[j]).abs()) / dev_denom;
            let l = (pi.max(pj) - R::one()) / lvl_denom;
            let r = d.exp() + l.exp() - two;
            d_term[i * n + j] = d;
            l_term[i * n + j] = l;
            raw[i * n + j] = r;
            total = total + r;
        }
    }
    if total <= R::zero() {
        // Happens only at n = 2 with q = p where d = 0 everywhere is
        // impossible (l = 1 keeps the raw terms positive), so this is a
        // genuine internal inconsistency if hit.
        return Err(Error::InvalidArgument(
            "importance weights sum to zero".into(),
        ));
    }
    let w = raw.iter().map(|&r| r / total).collect();
    Ok(ImportanceWeights {
        n,
        w,
        d_term,
        l_term,
    })
}

/// The PWRC sorting accuracy at one sensory threshold.
pub fn pwrc<R: Real>(
    x_hat: &NormalizedScoreSet<R>,
    p: &RankVector<R>,
    q: &RankVector<R>,
    threshold: R,
    config: &PwrcConfig<R>,
) -> Result<R> {
    let n = p.len();
    if x_hat.len() != n || q.len() != n {
        return Err(Error::LengthMismatch {
            left: x_hat.len(),
            right: n,
        });
    }
    if threshold < R::zero() {
        return Err(Error::InvalidArgument(format!(
            "sensory threshold must be >= 0, got {threshold}"
        )));
    }
    if !p.is_canonical() {
        return Err(Error::NonCanonicalRanks);
    }
    let weights = match config.weights {
        WeightScheme::Perceptual => Some(importance_weights(p, q)?),
        WeightScheme::Uniform => {
            if q.has_ties() {
                return Err(Error::TiedValues("pwrc needs untied q".into()));
            }
            None
        }
    };
    let scores = x_hat.scores();
    let pr = p.ranks();
    let qr = q.ranks();
    let nf = R::of_usize(n);
    // 2/(n^2 - n) per unordered pair, visited twice in the ordered sum.
    let uniform = R::one() / (nf * nf - nf);

    let mut sum = R::zero();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let a = activation(scores[i], scores[j], threshold, &config.activation);
            let d = detection(pr[i], pr[j], qr[i], qr[j])?;
            let m = match &weights {
                Some(w) => w.weight(i, j),
                None => uniform,
            };
            sum = sum + a * d * m;
        }
    }
    Ok(sum)
}

/// A sampled SA-ST curve.
#[derive(Debug, Clone)]
pub struct SaStCurve<R> {
    thresholds: Vec<R>,
    accuracies: Vec<R>,
    c1: R,
}

impl<R: Real> SaStCurve<R> {
    pub fn new(thresholds: Vec<R>, accuracies: Vec<R>, c1: R) -> Result<Self> {
        if thresholds.len() != accuracies.len() {
            return Err(Error::LengthMismatch {
                left: thresholds.len(),
                right: accuracies.len(),
            });
        }
        if thresholds.len() < 2 {
            return Err(Error::TooFewItems {
                needed: 2,
                got: thresholds.len(),
            });
        }
        for w in thresholds.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidArgument(
                    "thresholds must be strictly increasing".into(),
                ));
            }
        }
        Ok(Self {
            thresholds,
            accuracies,
            c1,
        })
    }

    pub fn thresholds(&self) -> &[R] {
        &self.thresholds
    }

    pub fn accuracies(&self) -> &[R] {
        &self.accuracies
    }

    pub fn c1(&self) -> R {
        self.c1
    }

    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    /// Linear interpolation of S at an arbitrary threshold inside the
    /// sampled range.
    pub fn sample_at(&self, t: R) -> Result<R> {
        let ts = &self.thresholds;
        if t < ts[0] || t > ts[ts.len() - 1] {
            return Err(Error::InvalidArgument(format!(
                "threshold {t} outside sampled range [{}, {}]",
                ts[0],
                ts[ts.len() - 1]
            )));
        }
        let k = match ts.iter().position(|&x| x >= t) {
            Some(k) => k,
            None => ts.len() - 1,
        };
        if ts[k] == t {
            return Ok(self.accuracies[k]);
        }
        let (t0, t1) = (ts[k - 1], ts[k]);
        let (s0, s1) = (self.accuracies[k - 1], self.accuracies[k]);
        Ok(s0 + (s1 - s0) * (t - t0) / (t1 - t0))
    }
}

/// Samples the PWRC over a threshold grid.
pub fn sa_st_curve<R: Real>(
    x_hat: &NormalizedScoreSet<R>,
    p: &RankVector<R>,
    q: &RankVector<R>,
    thresholds: &[R],
    config: &PwrcConfig<R>,
) -> Result<SaStCurve<R>> {
    if thresholds.is_empty() {
        return Err(Error::TooFewItems { needed: 2, got: 0 });
    }
    let accuracies = thresholds
        .iter()
        .map(|&t| pwrc(x_hat, p, q, t, config))
        .collect::<Result<Vec<R>>>()?;
    SaStCurve::new(thresholds.to_vec(), accuracies, config.activation.c1)
}

/// `count` evenly spaced samples covering [lo, hi] inclusive.
pub fn uniform_grid<R: Real>(lo: R, hi: R, count: usize) -> Result<Vec<R>> {
    if count < 2 {
        return Err(Error::TooFewItems {
            needed: 2,
            got: count,
        });
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "grid bounds must satisfy lo < hi, got [{lo}, {hi}]"
        )));
    }
    let step = (hi - lo) / R::of_usize(count - 1);
    Ok((0..count)
        .map(|k| {
            if k == count - 1 {
                hi
            } else {
                lo + step * R::of_usize(k)
            }
        })
        .collect())
}

/// Confidence-aware AUC: the trapezoidal integral of the curve over
/// `[t_min, t_max]`, with linear interpolation where the interval endpoints
/// fall between samples.
pub fn auc_ca<R: Real>(curve: &SaStCurve<R>, t_min: R, t_max: R) -> Result<R> {
    // Also rejects NaN bounds, which compare as unordered.
    if t_min.partial_cmp(&t_max) != Some(std::cmp::Ordering::Less) {
        return Err(Error::DegenerateThresholdRange {
            t_min: t_min.to_f64().unwrap_or(f64::NAN),
            t_max: t_max.to_f64().unwrap_or(f64::NAN),
        });
    }
    let ts = curve.thresholds();
    let ss = curve.accuracies();
    if t_min < ts[0] || t_max > ts[ts.len() - 1] {
        return Err(Error::InvalidArgument(format!(
            "[{t_min}, {t_max}] outside the sampled range [{}, {}]",
            ts[0],
            ts[ts.len() - 1]
        )));
    }
    let s_min = curve.sample_at(t_min)?;
    let s_max = curve.sample_at(t_max)?;
    let two = R::c(2.0);

    let mut total = R::zero();
    let mut prev_t = t_min;
    let mut prev_s = s_min;
    for k in 0..ts.len() {
        if ts[k] <= t_min {
            continue;
        }
        if ts[k] >= t_max {
            break;
        }
        total = total + (ss[k] + prev_s) / two * (ts[k] - prev_t);
        prev_t = ts[k];
        prev_s = ss[k];
    }
    total = total + (s_max + prev_s) / two * (t_max - prev_t);
    Ok(total)
}

/// The confidence-aware integration bounds `(2 * min sigma, 2 * max sigma)`
/// from normalized stddevs.
pub fn threshold_range<R: Real>(stddevs: &[R]) -> Result<(R, R)> {
    if stddevs.is_empty() {
        return Err(Error::TooFewItems { needed: 1, got: 0 });
    }
    let mut min = stddevs[0];
    let mut max = stddevs[0];
    for &s in stddevs {
        if !s.is_finite() || s < R::zero() {
            return Err(Error::InvalidArgument(format!(
                "stddevs must be finite and >= 0, got {s}"
            )));
        }
        min = min.min(s);
        max = max.max(s);
    }
    let two = R::c(2.0);
    Ok((two * min, two * max))
}
