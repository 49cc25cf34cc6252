//! Push-accuracy benchmarks: the top-N subjective score gap, its mean over
//! N, image-wise group averaging, and disagreement counting between metric
//! rankings.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::RankVector;
use crate::scalar::Real;

/// Per-N push accuracy values plus their mean.
#[derive(Debug, Clone)]
pub struct PushAccuracy<R> {
    /// Values for N = 1..n-1, in the score scale the caller passed in.
    pub per_n: Vec<R>,
    /// Arithmetic mean of `per_n`.
    pub mean: R,
}

/// Mean subjective score of the prediction's top-N items minus the mean of
/// the rest. "Top-N" is the set with the highest predicted ranks, i.e.
/// `q_i in {n-N+1, ..., n}`.
///
/// `scores` may be raw or normalized; the result is on the same scale.
pub fn delta_d_n<R: Real>(scores: &[R], q: &RankVector<R>, n_top: usize) -> Result<R> {
    let n = scores.len();
    if q.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: q.len(),
        });
    }
    if n_top < 1 || n_top > n - 1 {
        return Err(Error::InvalidArgument(format!(
            "N must be in [1, {}], got {n_top}",
            n - 1
        )));
    }
    if q.has_ties() {
        return Err(Error::TiedValues("push accuracy needs untied q".into()));
    }
    let cut = R::of_usize(n - n_top);
    let mut top = R::zero();
    let mut rest = R::zero();
    for (i, &s) in scores.iter().enumerate() {
        if q.ranks()[i] > cut {
            top = top + s;
        } else {
            rest = rest + s;
        }
    }
    Ok(top / R::of_usize(n_top) - rest / R::of_usize(n - n_top))
}

/// Mean of the top-N gaps over N = 1..n-1.
pub fn delta_mos<R: Real>(scores: &[R], q: &RankVector<R>) -> Result<PushAccuracy<R>> {
    let n = scores.len();
    if n < 2 {
        return Err(Error::TooFewItems { needed: 2, got: n });
    }
    let per_n = (1..n)
        .map(|k| delta_d_n(scores, q, k))
        .collect::<Result<Vec<R>>>()?;
    let mean = per_n.iter().copied().sum::<R>() / R::of_usize(per_n.len());
    Ok(PushAccuracy { per_n, mean })
}

/// A per-group indicator table with its unweighted mean, so every raw image
/// contributes equally regardless of how many enhanced versions it has.
#[derive(Debug, Clone)]
pub struct GroupedEvaluation<R> {
    pub per_group: BTreeMap<String, R>,
    pub mean: R,
}

/// Unweighted arithmetic mean across groups.
pub fn grouped_mean<R: Real>(per_group: &BTreeMap<String, R>) -> Result<GroupedEvaluation<R>> {
    if per_group.is_empty() {
        return Err(Error::TooFewItems { needed: 1, got: 0 });
    }
    let mean = per_group.values().copied().sum::<R>() / R::of_usize(per_group.len());
    Ok(GroupedEvaluation {
        per_group: per_group.clone(),
        mean,
    })
}

/// Number of unordered metric pairs ordered differently by the two rankings
/// (Kendall discordance count). Both lists name the same metrics, best first.
pub fn disagreement_count<S: AsRef<str>>(
    indicator_ranking: &[S],
    benchmark_ranking: &[S],
) -> Result<usize> {
    if indicator_ranking.len() != benchmark_ranking.len() {
        return Err(Error::LengthMismatch {
            left: indicator_ranking.len(),
            right: benchmark_ranking.len(),
        });
    }
    let mut position = BTreeMap::new();
    for (pos, id) in benchmark_ranking.iter().enumerate() {
        if position.insert(id.as_ref(), pos).is_some() {
            return Err(Error::DuplicateId(id.as_ref().to_string()));
        }
    }
    let mapped: Vec<usize> = indicator_ranking
        .iter()
        .map(|id| {
            position.get(id.as_ref()).copied().ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "metric `{}` missing from the benchmark ranking",
                    id.as_ref()
                ))
            })
        })
        .collect::<Result<_>>()?;
    if mapped.len() != position.len() {
        return Err(Error::InvalidArgument("rankings differ in id sets".into()));
    }
    let mut count = 0;
    for i in 0..mapped.len() {
        for j in (i + 1)..mapped.len() {
            if mapped[i] > mapped[j] {
                count += 1;
            }
        }
    }
    Ok(count)
}
