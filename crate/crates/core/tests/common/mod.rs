//! Shared helpers for the integration suites: permutation enumeration and
//! quick construction of score sets.

use pwrc::model::{normalize, NormalizedScoreSet, Polarity, RankVector, ScoreItem, ScoreSet};

/// All permutations of 1..=n, in a deterministic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
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

pub fn rank(perm: &[usize]) -> RankVector<f64> {
    RankVector::from_permutation(perm.to_vec()).unwrap()
}

pub fn mos_set(scores: &[f64]) -> ScoreSet<f64> {
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
    ScoreSet::new(items, Polarity::Mos).unwrap()
}

pub fn normalized(scores: &[f64]) -> NormalizedScoreSet<f64> {
    normalize(&mos_set(scores), None).unwrap()
}

/// Ascending scores for an n-item synthetic set; n = 5 matches the
/// {5, 10, 20, 35, 55} example, other n extend the doubling-gap pattern.
pub fn synthetic_scores(n: usize) -> Vec<f64> {
    let mut out = vec![5.0];
    let mut gap = 5.0;
    while out.len() < n {
        let last = *out.last().unwrap();
        out.push(last + gap);
        gap *= 2.0;
    }
    out.truncate(n);
    out
}
