use serde::{Deserialize, Serialize};

use crate::data::EmbeddingSet;
use crate::error::{LidError, Result};
use crate::neighbors::{pairwise_distances, DUPLICATE_EPS};

pub const DEFAULT_TRIM_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoNnFit {
    pub dimension: f64,
    /// Points whose ratio entered the likelihood (the rest are censored).
    pub kept: usize,
    /// Points with a defined ratio.
    pub total: usize,
    pub skipped: usize,
}

/// Global TwoNN estimate from the ratios `mu = Q_2 / Q_1`.
///
/// `mu` is Pareto distributed with exponent `d`. The largest `trim_fraction`
/// of ratios are treated as censored at the largest kept ratio, giving the
/// closed form
///
/// `d = r / (sum_{i<=r} ln mu_(i) + (N - r) ln mu_(r))`
///
/// which reduces to `N / sum ln mu_i` without trimming. Points whose nearest
/// neighbor is a duplicate (closer than [`DUPLICATE_EPS`]) are skipped.
pub fn twonn_global(set: &EmbeddingSet, trim_fraction: f64) -> Result<TwoNnFit> {
    if !(0.0..1.0).contains(&trim_fraction) {
        return Err(LidError::InvalidParameter(format!(
            "trim fraction must be in [0, 1), got {trim_fraction}"
        )));
    }
    let n = set.len();
    if n < 3 {
        return Err(LidError::InvalidParameter(format!(
            "TwoNN needs at least 3 points, got {n}"
        )));
    }
    let dist = pairwise_distances(set);
    let mut ratios = Vec::with_capacity(n);
    let mut skipped = 0;
    for i in 0..n {
        let (mut q1, mut q2) = (f64::INFINITY, f64::INFINITY);
        for (j, &d) in dist[i * n..(i + 1) * n].iter().enumerate() {
            if j == i {
                continue;
            }
            if d < q1 {
                q2 = q1;
                q1 = d;
            } else if d < q2 {
                q2 = d;
            }
        }
        if q1 <= DUPLICATE_EPS {
            log::warn!("TwoNN: skipping {} (duplicate nearest neighbor)", set.id(i));
            skipped += 1;
            continue;
        }
        ratios.push(q2 / q1);
    }
    if ratios.is_empty() {
        return Err(LidError::Estimation(
            "TwoNN: every point was skipped".into(),
        ));
    }
    let dimension = censored_pareto_mle(&mut ratios, trim_fraction)?;
    let total = ratios.len();
    Ok(TwoNnFit {
        dimension,
        kept: total - discard_count(total, trim_fraction),
        total,
        skipped,
    })
}

fn discard_count(total: usize, trim_fraction: f64) -> usize {
    ((trim_fraction * total as f64).floor() as usize).min(total - 1)
}

pub(crate) fn censored_pareto_mle(ratios: &mut [f64], trim_fraction: f64) -> Result<f64> {
    ratios.sort_unstable_by(f64::total_cmp);
    let total = ratios.len();
    let kept = total - discard_count(total, trim_fraction);
    let logs: f64 = ratios[..kept].iter().map(|m| m.ln()).sum();
    let censored = (total - kept) as f64 * ratios[kept - 1].ln();
    let denom = logs + censored;
    if denom <= 0.0 {
        return Err(LidError::DegenerateNeighborhood);
    }
    Ok(kept as f64 / denom)
}
