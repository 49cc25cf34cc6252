//! Shared data model: subjective score sets, [0, 100] normalization, and
//! rank transforms.
//!
//! Every indicator downstream consumes these types. Normalization follows the
//! affine map with scaling factor `omega = 1/(max - min)` and bias
//! `epsilon = -min/(max - min)`, flipping DMOS so that higher always means
//! better. Ranks are ascending: rank 1 is the worst-quality item.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Orientation of a subjective score scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// Mean opinion score: higher is better.
    Mos,
    /// Differential MOS: higher is worse.
    Dmos,
}

/// Orientation of an objective metric's output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionPolarity {
    HigherIsBetter,
    LowerIsBetter,
}

/// How exact ties are resolved when ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Fail loudly on any tie. Default for the PWRC path, where silent
    /// tie-breaking changes the weights.
    #[default]
    Strict,
    /// Break ties by input position.
    StableOrder,
    /// Assign mid-ranks. Only meaningful for the Spearman path.
    Average,
}

/// One subjectively rated item.
#[derive(Debug, Clone)]
pub struct ScoreItem<R> {
    pub id: String,
    /// Subjective score in the source scale.
    pub score: R,
    /// Standard deviation of the opinion scores, source scale.
    pub stddev: R,
    /// Content group (images sharing a reference belong to one group).
    pub group: String,
}

/// A set of subjective scores with a declared polarity.
#[derive(Debug, Clone)]
pub struct ScoreSet<R> {
    items: Vec<ScoreItem<R>>,
    polarity: Polarity,
}

impl<R: Real> ScoreSet<R> {
    pub fn new(items: Vec<ScoreItem<R>>, polarity: Polarity) -> Result<Self> {
        if items.len() < 2 {
            return Err(Error::TooFewItems {
                needed: 2,
                got: items.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for item in &items {
            if !item.score.is_finite() {
                return Err(Error::NonFinite(format!("score of `{}`", item.id)));
            }
            if !item.stddev.is_finite() {
                return Err(Error::NonFinite(format!("stddev of `{}`", item.id)));
            }
            if item.stddev < R::zero() {
                return Err(Error::NegativeStddev(item.id.clone()));
            }
            if !seen.insert(item.id.as_str()) {
                return Err(Error::DuplicateId(item.id.clone()));
            }
        }
        Ok(Self { items, polarity })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[ScoreItem<R>] {
        &self.items
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn scores(&self) -> Vec<R> {
        self.items.iter().map(|it| it.score).collect()
    }

    pub fn stddevs(&self) -> Vec<R> {
        self.items.iter().map(|it| it.stddev).collect()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.items.iter().map(|it| it.id.as_str()).collect()
    }

    /// Group ids in first-occurrence order, deduplicated.
    pub fn groups(&self) -> Vec<String> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for it in &self.items {
            if seen.insert(it.group.as_str()) {
                out.push(it.group.clone());
            }
        }
        out
    }

    /// Sub-set with only the items whose index is in `keep` (in `keep` order).
    pub fn subset(&self, keep: &[usize]) -> Result<Self> {
        let items = keep.iter().map(|&i| self.items[i].clone()).collect();
        Self::new(items, self.polarity)
    }
}

/// Scores mapped onto [0, 100], always oriented higher-is-better.
#[derive(Debug, Clone)]
pub struct NormalizedScoreSet<R> {
    scores: Vec<R>,
    stddevs: Vec<R>,
    omega: R,
    epsilon: R,
}

impl<R: Real> NormalizedScoreSet<R> {
    pub fn scores(&self) -> &[R] {
        &self.scores
    }

    pub fn stddevs(&self) -> &[R] {
        &self.stddevs
    }

    pub fn omega(&self) -> R {
        self.omega
    }

    pub fn epsilon(&self) -> R {
        self.epsilon
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    fn reordered(&self, order: &[usize]) -> Self {
        Self {
            scores: order.iter().map(|&i| self.scores[i]).collect(),
            stddevs: order.iter().map(|&i| self.stddevs[i]).collect(),
            omega: self.omega,
            epsilon: self.epsilon,
        }
    }
}

/// One metric's predictions, aligned by id to a [`ScoreSet`].
#[derive(Debug, Clone)]
pub struct PredictionSet<R> {
    ids: Vec<String>,
    values: Vec<R>,
    polarity: PredictionPolarity,
}

impl<R: Real> PredictionSet<R> {
    pub fn new(ids: Vec<String>, values: Vec<R>, polarity: PredictionPolarity) -> Result<Self> {
        if ids.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: ids.len(),
                right: values.len(),
            });
        }
        for (id, v) in ids.iter().zip(&values) {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("prediction for `{id}`")));
            }
        }
        Ok(Self {
            ids,
            values,
            polarity,
        })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn values(&self) -> &[R] {
        &self.values
    }

    pub fn polarity(&self) -> PredictionPolarity {
        self.polarity
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sub-set by item index, preserving `keep` order.
    pub fn subset(&self, keep: &[usize]) -> Result<Self> {
        Self::new(
            keep.iter().map(|&i| self.ids[i].clone()).collect(),
            keep.iter().map(|&i| self.values[i]).collect(),
            self.polarity,
        )
    }
}

/// Rank values for a sequence. Under `Strict` and `StableOrder` the entries
/// are exactly the set {1, ..., n}; under `Average` mid-ranks may appear.
#[derive(Debug, Clone)]
pub struct RankVector<R> {
    ranks: Vec<R>,
    tie_policy: TiePolicy,
}

impl<R: Real> RankVector<R> {
    /// Builds a rank vector from an integer permutation of 1..n.
    pub fn from_permutation(ranks: Vec<usize>) -> Result<Self> {
        let n = ranks.len();
        let mut seen = vec![false; n];
        for &r in &ranks {
            if r < 1 || r > n || seen[r - 1] {
                return Err(Error::InvalidRanks(format!(
                    "expected a permutation of 1..{n}, got {ranks:?}"
                )));
            }
            seen[r - 1] = true;
        }
        Ok(Self {
            ranks: ranks.into_iter().map(R::of_usize).collect(),
            tie_policy: TiePolicy::Strict,
        })
    }

    /// The identity ranks 1..n.
    pub fn canonical(n: usize) -> Self {
        Self {
            ranks: (1..=n).map(R::of_usize).collect(),
            tie_policy: TiePolicy::Strict,
        }
    }

    pub fn ranks(&self) -> &[R] {
        &self.ranks
    }

    pub fn tie_policy(&self) -> TiePolicy {
        self.tie_policy
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// True when the ranks are exactly 1, 2, ..., n in order.
    pub fn is_canonical(&self) -> bool {
        self.ranks
            .iter()
            .enumerate()
            .all(|(i, &r)| r == R::of_usize(i + 1))
    }

    /// True when some rank value repeats (mid-ranks from `Average` ties).
    pub fn has_ties(&self) -> bool {
        for i in 0..self.ranks.len() {
            for j in (i + 1)..self.ranks.len() {
                if self.ranks[i] == self.ranks[j] {
                    return true;
                }
            }
        }
        false
    }
}

/// Normalizes a score set onto [0, 100], higher-is-better.
///
/// `pool` supplies the score collection that `omega`/`epsilon` are fit on;
/// it defaults to `scores` itself. When a score from a foreign pool lands
/// outside [0, 100] the result is clamped and a warning is logged.
pub fn normalize<R: Real>(
    scores: &ScoreSet<R>,
    pool: Option<&ScoreSet<R>>,
) -> Result<NormalizedScoreSet<R>> {
    let pool_scores: Vec<R> = match pool {
        Some(p) => p.scores(),
        None => scores.scores(),
    };
    let (omega, epsilon) = fit_normalization(&pool_scores)?;
    let hundred = R::c(100.0);
    let mut out_scores = Vec::with_capacity(scores.len());
    for item in scores.items() {
        let affine = omega * item.score + epsilon;
        let value = match scores.polarity() {
            Polarity::Mos => affine * hundred,
            Polarity::Dmos => (R::one() - affine) * hundred,
        };
        let clamped = value.max(R::zero()).min(hundred);
        if clamped != value {
            log::warn!(
                "normalized score {value} for `{}` outside [0, 100]; clamped",
                item.id
            );
        }
        out_scores.push(clamped);
    }
    let stddevs = scores
        .items()
        .iter()
        .map(|it| omega * it.stddev * hundred)
        .collect();
    Ok(NormalizedScoreSet {
        scores: out_scores,
        stddevs,
        omega,
        epsilon,
    })
}

/// Fits `(omega, epsilon)` on a score pool.
pub fn fit_normalization<R: Real>(pool: &[R]) -> Result<(R, R)> {
    if pool.is_empty() {
        return Err(Error::TooFewItems { needed: 1, got: 0 });
    }
    let mut min = pool[0];
    let mut max = pool[0];
    for &v in pool {
        if !v.is_finite() {
            return Err(Error::NonFinite("score pool entry".into()));
        }
        min = min.min(v);
        max = max.max(v);
    }
    if max == min {
        return Err(Error::ConstantScorePool);
    }
    let span = max - min;
    Ok((span.recip(), -min / span))
}

/// Ranks `scores` ascending: rank 1 for the smallest value, rank n for the
/// largest. See [`TiePolicy`] for tie handling.
pub fn rank_transform<R: Real>(scores: &[R], tie_policy: TiePolicy) -> Result<RankVector<R>> {
    let n = scores.len();
    if n < 2 {
        return Err(Error::TooFewItems { needed: 2, got: n });
    }
    for (i, v) in scores.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("score at position {i}")));
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps input position as the tie-break for StableOrder.
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("finite"));

    let mut ranks = vec![R::zero(); n];
    match tie_policy {
        TiePolicy::Strict => {
            for w in order.windows(2) {
                if scores[w[0]] == scores[w[1]] {
                    return Err(Error::TiedValues(format!(
                        "positions {} and {} share value {}",
                        w[0], w[1], scores[w[0]]
                    )));
                }
            }
            for (pos, &idx) in order.iter().enumerate() {
                ranks[idx] = R::of_usize(pos + 1);
            }
        }
        TiePolicy::StableOrder => {
            for (pos, &idx) in order.iter().enumerate() {
                ranks[idx] = R::of_usize(pos + 1);
            }
        }
        TiePolicy::Average => {
            let mut start = 0;
            while start < n {
                let mut end = start;
                while end + 1 < n && scores[order[end + 1]] == scores[order[start]] {
                    end += 1;
                }
                // Mid-rank of positions start..=end (1-based).
                let mid = R::of_usize(start + 1 + end + 1) / R::c(2.0);
                for &idx in &order[start..=end] {
                    ranks[idx] = mid;
                }
                start = end + 1;
            }
        }
    }
    Ok(RankVector { ranks, tie_policy })
}

/// Output of [`ground_truth_pairing`]: items reordered so the ground-truth
/// ranks are exactly 1..n.
#[derive(Debug, Clone)]
pub struct Pairing<R> {
    /// Ground-truth ranks, always the canonical 1..n.
    pub ground_truth: RankVector<R>,
    /// Prediction ranks for the item at each ground-truth position.
    pub predicted: RankVector<R>,
    /// Normalized subjective scores in ground-truth order.
    pub normalized: NormalizedScoreSet<R>,
    /// Maps reordered position -> original item index.
    pub order: Vec<usize>,
}

/// Pairs a subjective set with one metric's predictions in the canonical
/// orientation: items ascending by normalized subjective quality, so the
/// ground-truth ranks come out as 1..n. Lower-is-better predictions are
/// negated before ranking so rank n always means "predicted best".
pub fn ground_truth_pairing<R: Real>(
    subjective: &ScoreSet<R>,
    prediction: &PredictionSet<R>,
    pool: Option<&ScoreSet<R>>,
    tie_policy: TiePolicy,
) -> Result<Pairing<R>> {
    if subjective.len() != prediction.len() {
        return Err(Error::LengthMismatch {
            left: subjective.len(),
            right: prediction.len(),
        });
    }
    for (pos, (item, pid)) in subjective.items().iter().zip(prediction.ids()).enumerate() {
        if item.id != *pid {
            return Err(Error::MisalignedIds {
                position: pos,
                expected: item.id.clone(),
                got: pid.clone(),
            });
        }
    }
    if tie_policy == TiePolicy::Average {
        return Err(Error::InvalidArgument(
            "Average tie policy is reserved for the Spearman path; \
             ground-truth pairing needs untied ranks"
                .into(),
        ));
    }

    let normalized = normalize(subjective, pool)?;
    let n = subjective.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        normalized.scores()[a]
            .partial_cmp(&normalized.scores()[b])
            .expect("finite")
    });
    if tie_policy == TiePolicy::Strict {
        for w in order.windows(2) {
            if normalized.scores()[w[0]] == normalized.scores()[w[1]] {
                return Err(Error::TiedValues(format!(
                    "subjective ids `{}` and `{}` share a normalized score",
                    subjective.items()[w[0]].id,
                    subjective.items()[w[1]].id
                )));
            }
        }
    }

    let reordered_predictions: Vec<R> = order
        .iter()
        .map(|&i| match prediction.polarity() {
            PredictionPolarity::HigherIsBetter => prediction.values()[i],
            PredictionPolarity::LowerIsBetter => -prediction.values()[i],
        })
        .collect();
    let predicted = rank_transform(&reordered_predictions, tie_policy)?;

    Ok(Pairing {
        ground_truth: RankVector::canonical(n),
        predicted,
        normalized: normalized.reordered(&order),
        order,
    })
}
