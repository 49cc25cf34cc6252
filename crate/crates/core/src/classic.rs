//! Classic rank correlation: the generalized coefficient and its Spearman
//! and Kendall specializations, plus the mistaken-pair count.
//!
//! The generalized coefficient over anti-symmetric correlate matrices is
//!
//! ```text
//! gamma = sum(a_ij * b_ij) / sqrt(sum(a_ij^2) * sum(b_ij^2))
//! ```
//!
//! Setting `a_ij = p_i - p_j` recovers Spearman's rho; setting
//! `a_ij = sgn(p_i - p_j)` recovers Kendall's tau.

use crate::error::{Error, Result};
use crate::model::RankVector;
use crate::scalar::Real;

/// Anti-symmetric pairwise correlate matrices for the generalized
/// coefficient. Stored row-major, zero diagonal.
#[derive(Debug, Clone)]
pub struct PairwiseCorrelates<R> {
    n: usize,
    a: Vec<R>,
    b: Vec<R>,
}

impl<R: Real> PairwiseCorrelates<R> {
    /// Builds from explicit n*n matrices, validating anti-symmetry.
    pub fn new(n: usize, a: Vec<R>, b: Vec<R>) -> Result<Self> {
        if a.len() != n * n || b.len() != n * n {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: n * n,
            });
        }
        for (name, m) in [("a", &a), ("b", &b)] {
            for i in 0..n {
                for j in 0..n {
                    if m[i * n + j] != -m[j * n + i] {
                        return Err(Error::InvalidArgument(format!(
                            "matrix {name} is not anti-symmetric at ({i}, {j})"
                        )));
                    }
                }
            }
        }
        Ok(Self { n, a, b })
    }

    /// Rank-difference correlates `a_ij = p_i - p_j`, the Spearman instantiation.
    pub fn from_rank_differences(p: &RankVector<R>, q: &RankVector<R>) -> Result<Self> {
        check_pair(p, q)?;
        let n = p.len();
        let build = |r: &[R]| {
            let mut m = vec![R::zero(); n * n];
            for i in 0..n {
                for j in 0..n {
                    m[i * n + j] = r[i] - r[j];
                }
            }
            m
        };
        Ok(Self {
            n,
            a: build(p.ranks()),
            b: build(q.ranks()),
        })
    }

    /// Sign correlates `a_ij = sgn(p_i - p_j)`, the Kendall instantiation.
    /// Rejects ties, since the signum is undefined at zero.
    pub fn from_rank_signs(p: &RankVector<R>, q: &RankVector<R>) -> Result<Self> {
        check_pair(p, q)?;
        let n = p.len();
        let build = |r: &[R]| -> Result<Vec<R>> {
            let mut m = vec![R::zero(); n * n];
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        m[i * n + j] = sgn(r[i] - r[j])?;
                    }
                }
            }
            Ok(m)
        };
        Ok(Self {
            n,
            a: build(p.ranks())?,
            b: build(q.ranks())?,
        })
    }
}

/// Binary signum: +1 for positive, -1 for negative, undefined at zero.
fn sgn<R: Real>(v: R) -> Result<R> {
    if v > R::zero() {
        Ok(R::one())
    } else if v < R::zero() {
        Ok(-R::one())
    } else {
        Err(Error::TiedValues("signum of a zero rank difference".into()))
    }
}

fn check_pair<R: Real>(p: &RankVector<R>, q: &RankVector<R>) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    if p.len() < 2 {
        return Err(Error::TooFewItems {
            needed: 2,
            got: p.len(),
        });
    }
    Ok(())
}

fn check_untied<R: Real>(p: &RankVector<R>, q: &RankVector<R>) -> Result<()> {
    if p.has_ties() || q.has_ties() {
        return Err(Error::TiedValues(
            "tied ranks are not supported here".into(),
        ));
    }
    Ok(())
}

/// The generalized correlation coefficient over correlate matrices.
pub fn generalized_gamma<R: Real>(correlates: &PairwiseCorrelates<R>) -> Result<R> {
    let mut num = R::zero();
    let mut sa = R::zero();
    let mut sb = R::zero();
    let n = correlates.n;
    for i in 0..n {
        for j in 0..n {
            let a = correlates.a[i * n + j];
            let b = correlates.b[i * n + j];
            num = num + a * b;
            sa = sa + a * a;
            sb = sb + b * b;
        }
    }
    if sa == R::zero() {
        return Err(Error::DegenerateCorrelates("all-zero a matrix"));
    }
    if sb == R::zero() {
        return Err(Error::DegenerateCorrelates("all-zero b matrix"));
    }
    Ok(num / (sa * sb).sqrt())
}

/// Spearman's rho. Untied permutations go through the closed form
/// `1 - 6 * sum(d_i^2) / (n^3 - n)`; tied (mid-rank) inputs fall back to the
/// general rank-difference form, which stays valid without the no-ties
/// assumption.
pub fn spearman_rho<R: Real>(p: &RankVector<R>, q: &RankVector<R>) -> Result<R> {
    check_pair(p, q)?;
    if p.has_ties() || q.has_ties() {
        return spearman_rho_general(p, q);
    }
    let n = p.len();
    let d2: R = p
        .ranks()
        .iter()
        .zip(q.ranks())
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum();
    let nf = R::of_usize(n);
    let w = R::c(6.0) / (nf * nf * nf - nf);
    Ok(R::one() - w * d2)
}

/// The general rank-difference form of Spearman's rho (the generalized
/// coefficient with `a_ij = p_i - p_j`). Accepts mid-ranks.
pub fn spearman_rho_general<R: Real>(p: &RankVector<R>, q: &RankVector<R>) -> Result<R> {
    let correlates = PairwiseCorrelates::from_rank_differences(p, q)?;
    generalized_gamma(&correlates)
}

/// Kendall's tau over untied permutations:
/// `tau = w * sum sgn(p_i - p_j) * sgn(q_i - q_j)` with `w = 2/(n^2 - n)`
/// per unordered pair. (Summing over ordered pairs doubles both the sum and
/// the pair count, so the two readings agree only with this weighting.)
pub fn kendall_tau<R: Real>(p: &RankVector<R>, q: &RankVector<R>) -> Result<R> {
    check_pair(p, q)?;
    check_untied(p, q)?;
    let n = p.len();
    let pr = p.ranks();
    let qr = q.ranks();
    let mut sum = R::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            sum = sum + sgn(pr[i] - pr[j])? * sgn(qr[i] - qr[j])?;
        }
    }
    let nf = R::of_usize(n);
    Ok(R::c(2.0) / (nf * nf - nf) * sum)
}

/// Number of discordant unordered pairs, in [0, n(n-1)/2].
pub fn mistaken_pair_count<R: Real>(p: &RankVector<R>, q: &RankVector<R>) -> Result<usize> {
    check_pair(p, q)?;
    check_untied(p, q)?;
    let pr = p.ranks();
    let qr = q.ranks();
    let mut count = 0;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            let concordant = (pr[i] - pr[j]) * (qr[i] - qr[j]) > R::zero();
            if !concordant {
                count += 1;
            }
        }
    }
    Ok(count)
}
