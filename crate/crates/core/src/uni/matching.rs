//! Minimum-weight maximum-cardinality matching on small complete graphs.
//!
//! Up to the exactness threshold a subset DP is exact; above it a greedy
//! cheapest-pair-first matching is used and callers double the guarantees
//! they report.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Cost;

pub const DEFAULT_EXACT_THRESHOLD: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingResult {
    /// Index pairs `(i, j)` with `i < j`, sorted.
    pub pairs: Vec<(usize, usize)>,
    pub total_weight: Cost,
    pub is_exact: bool,
}

impl MatchingResult {
    pub fn unmatched(&self, m: usize) -> Vec<usize> {
        let mut used = vec![false; m];
        for &(i, j) in &self.pairs {
            used[i] = true;
            used[j] = true;
        }
        (0..m).filter(|&i| !used[i]).collect()
    }
}

pub fn min_weight_matching(weights: &[Vec<Cost>]) -> Result<MatchingResult> {
    min_weight_matching_with_threshold(weights, DEFAULT_EXACT_THRESHOLD)
}

pub fn min_weight_matching_with_threshold(
    weights: &[Vec<Cost>],
    exact_threshold: usize,
) -> Result<MatchingResult> {
    let m = weights.len();
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "matching needs at least 2 nodes, got {m}"
        )));
    }
    if weights.iter().any(|row| row.len() != m) {
        return Err(Error::InvalidParameter(
            "weight matrix is not square".into(),
        ));
    }
    let mut result = if m <= exact_threshold {
        subset_dp(weights)?
    } else {
        greedy(weights)?
    };
    result.pairs.sort_unstable();
    Ok(result)
}

fn w(weights: &[Vec<Cost>], i: usize, j: usize) -> Cost {
    weights[i][j].min(weights[j][i])
}

/// `cost[skip][mask]`: least weight to finish once the nodes in `mask` are
/// settled; `skip` records whether the one allowed unmatched node (odd `m`)
/// has been used.
fn subset_dp(weights: &[Vec<Cost>]) -> Result<MatchingResult> {
    let m = weights.len();
    let full = (1usize << m) - 1;
    let skips = if m % 2 == 1 { 2 } else { 1 };
    const INF: Cost = Cost::MAX;
    let mut cost = vec![vec![INF; full + 1]; skips];
    for row in cost.iter_mut() {
        row[full] = 0;
    }
    for mask in (0..full).rev() {
        let i = (!mask).trailing_zeros() as usize;
        for skipped in 0..skips {
            let mut best = INF;
            for j in (i + 1)..m {
                if mask & (1 << j) != 0 {
                    continue;
                }
                let rest = cost[skipped][mask | (1 << i) | (1 << j)];
                if rest != INF {
                    let cand = rest.checked_add(w(weights, i, j)).ok_or(Error::Overflow)?;
                    best = best.min(cand);
                }
            }
            if skips == 2 && skipped == 0 {
                best = best.min(cost[1][mask | (1 << i)]);
            }
            cost[skipped][mask] = best;
        }
    }

    let mut pairs = Vec::with_capacity(m / 2);
    let (mut mask, mut skipped) = (0usize, 0usize);
    while mask != full {
        let i = (!mask).trailing_zeros() as usize;
        let target = cost[skipped][mask];
        let mut next = None;
        for j in (i + 1)..m {
            if mask & (1 << j) == 0 {
                let rest = cost[skipped][mask | (1 << i) | (1 << j)];
                if rest != INF && rest + w(weights, i, j) == target {
                    next = Some(j);
                    break;
                }
            }
        }
        match next {
            Some(j) => {
                pairs.push((i, j));
                mask |= (1 << i) | (1 << j);
            }
            None => {
                debug_assert!(skips == 2 && skipped == 0);
                mask |= 1 << i;
                skipped = 1;
            }
        }
    }
    Ok(MatchingResult {
        pairs,
        total_weight: cost[0][0],
        is_exact: true,
    })
}

fn greedy(weights: &[Vec<Cost>]) -> Result<MatchingResult> {
    let m = weights.len();
    let mut candidates: Vec<(Cost, usize, usize)> = Vec::with_capacity(m * (m - 1) / 2);
    for i in 0..m {
        for j in (i + 1)..m {
            candidates.push((w(weights, i, j), i, j));
        }
    }
    candidates.sort_unstable();
    let mut used = vec![false; m];
    let mut pairs = Vec::with_capacity(m / 2);
    let mut total: Cost = 0;
    for (wij, i, j) in candidates {
        if !used[i] && !used[j] {
            used[i] = true;
            used[j] = true;
            pairs.push((i, j));
            total = total.checked_add(wij).ok_or(Error::Overflow)?;
        }
    }
    Ok(MatchingResult {
        pairs,
        total_weight: total,
        is_exact: false,
    })
}
