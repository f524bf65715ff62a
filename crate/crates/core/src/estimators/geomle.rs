//! Distance-corrected MLE.
//!
//! For each query the reference set is bootstrapped `p` times, keeping each
//! resampled row once. In every resample and for every neighbor count `T` in
//! `[t_min, t_max]` the MLE estimate and the `T`-th neighbor distance are
//! recorded. Their bootstrap means `m(T)`, `Q(T)` and the variance `sigma(T)`
//! of the estimates feed a weighted polynomial regression
//!
//! `min sum_T (1/sigma(T)) * (m(T) - z0 - sum_{j=1..l} z_j Q(T)^j)^2`
//!
//! and the intercept `z0`, the estimate extrapolated to zero radius, is the
//! reported dimension.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Diagnostics, LidEstimate, Method};
use crate::data::EmbeddingSet;
use crate::error::{LidError, Result};
use crate::neighbors::{check_neighbor_count, distance_row, select_smallest, DUPLICATE_EPS};

/// Bootstrap variances below this are raised to it before weighting.
pub const VARIANCE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeomleConfig {
    pub bootstrap_count: usize,
    pub t_min: usize,
    pub t_max: usize,
    pub degree: usize,
    pub rng_seed: u64,
}

impl GeomleConfig {
    /// Defaults for a neighbor budget `t`: 20 resamples, `T` in
    /// `[max(10, ceil(t/2)), t]`, quadratic correction.
    pub fn for_neighbors(t: usize) -> Self {
        Self {
            bootstrap_count: 20,
            t_min: 10.max(t.div_ceil(2)),
            t_max: t,
            degree: 2,
            rng_seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.bootstrap_count < 2 {
            return Err(LidError::InvalidParameter(format!(
                "bootstrap count must be at least 2, got {}",
                self.bootstrap_count
            )));
        }
        if self.t_min < 2 || self.t_min >= self.t_max {
            return Err(LidError::InvalidParameter(format!(
                "neighbor range needs 2 <= t_min < t_max, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if self.degree < 1 {
            return Err(LidError::InvalidParameter(
                "polynomial degree must be at least 1".into(),
            ));
        }
        let points = self.t_max - self.t_min + 1;
        if points <= self.degree {
            return Err(LidError::InvalidParameter(format!(
                "{points} neighbor counts cannot fit a degree-{} polynomial",
                self.degree
            )));
        }
        Ok(())
    }
}

/// GeoMLE estimate for every query row.
///
/// `self_reference` has the same meaning as in [`crate::neighbors::knn_all`].
/// Each query draws its resamples from its own seeded stream, which keeps the
/// output independent of scheduling.
pub fn geomle_lid(
    queries: &EmbeddingSet,
    reference: &EmbeddingSet,
    cfg: &GeomleConfig,
    self_reference: bool,
) -> Result<Vec<LidEstimate>> {
    cfg.validate()?;
    check_neighbor_count(cfg.t_max)?;
    if queries.dim() != reference.dim() {
        return Err(LidError::DimensionMismatch {
            expected: reference.dim(),
            found: queries.dim(),
        });
    }
    if self_reference && queries.ids() != reference.ids() {
        return Err(LidError::IdMismatch(
            "self-reference mode needs queries and reference to be the same set".into(),
        ));
    }
    (0..queries.len())
        .into_par_iter()
        .map(|i| estimate_one(queries, i, reference, cfg, self_reference.then_some(i)))
        .collect()
}

struct BootstrapStats {
    mean_lid: Vec<f64>,
    mean_radius: Vec<f64>,
    variance: Vec<f64>,
}

fn estimate_one(
    queries: &EmbeddingSet,
    row: usize,
    reference: &EmbeddingSet,
    cfg: &GeomleConfig,
    exclude_row: Option<usize>,
) -> Result<LidEstimate> {
    let query_id = queries.id(row);
    let dists = distance_row(queries.row(row), reference)?;
    let usable: Vec<bool> = dists
        .iter()
        .enumerate()
        .map(|(r, d)| *d > DUPLICATE_EPS && Some(r) != exclude_row)
        .collect();
    let usable_count = usable.iter().filter(|u| **u).count();
    if usable_count < cfg.t_max {
        return Err(LidError::InsufficientNeighbors {
            requested: cfg.t_max,
            usable: usable_count,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    rng.set_stream(row as u64);
    let stats = bootstrap(&dists, &usable, cfg, &mut rng)?;

    let dim = reference.dim() as f64;
    let fit = fit_intercept(&stats, cfg.degree);
    let (value, coefficients, fallback) = match fit {
        Some((intercept, coefs)) if intercept > 0.0 && intercept <= dim => {
            (Some(intercept), coefs, false)
        }
        other => {
            log::debug!(
                "geomle intercept {:?} for {query_id} outside (0, {dim}], falling back to mle",
                other.as_ref().map(|f| f.0)
            );
            let coefs = other.map(|f| f.1).unwrap_or_default();
            (plain_mle(&dists, &usable, cfg.t_max, dim), coefs, true)
        }
    };

    Ok(LidEstimate {
        sample_id: query_id.to_owned(),
        value,
        method: Method::Geomle,
        neighbors: cfg.t_max,
        diagnostics: Diagnostics {
            sigma: stats.variance,
            coefficients,
            fallback,
        },
    })
}

fn bootstrap(
    dists: &[f64],
    usable: &[bool],
    cfg: &GeomleConfig,
    rng: &mut ChaCha8Rng,
) -> Result<BootstrapStats> {
    let n = dists.len();
    let span = cfg.t_max - cfg.t_min + 1;
    let mut lids = vec![Vec::with_capacity(cfg.bootstrap_count); span];
    let mut radius_sum = vec![0.0; span];
    let mut log_prefix = vec![0.0; cfg.t_max + 1];

    for _ in 0..cfg.bootstrap_count {
        // each resampled row enters once, so a repeat cannot tie with itself
        let mut picked: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        picked.sort_unstable();
        picked.dedup();
        let draws: Vec<(f64, usize)> = picked
            .into_iter()
            .filter(|&r| usable[r])
            .map(|r| (dists[r], r))
            .collect();
        if draws.len() < cfg.t_max {
            return Err(LidError::InsufficientNeighbors {
                requested: cfg.t_max,
                usable: draws.len(),
            });
        }
        let nearest = select_smallest(draws, cfg.t_max);
        // logs of ratios to the closest draw, which cancel in every sum below
        let base = nearest[0].0;
        for (j, (d, _)) in nearest.iter().enumerate() {
            log_prefix[j + 1] = log_prefix[j] + (d / base).ln();
        }
        for (k, t) in (cfg.t_min..=cfg.t_max).enumerate() {
            let far = nearest[t - 1].0;
            let log_sum = (t - 1) as f64 * (far / base).ln() - log_prefix[t - 1];
            if log_sum > 0.0 {
                lids[k].push((t - 1) as f64 / log_sum);
            }
            radius_sum[k] += far;
        }
    }

    let p = cfg.bootstrap_count as f64;
    let mut stats = BootstrapStats {
        mean_lid: Vec::with_capacity(span),
        mean_radius: Vec::with_capacity(span),
        variance: Vec::with_capacity(span),
    };
    for (k, values) in lids.iter().enumerate() {
        // a neighbor count that was degenerate in some resample has no usable mean
        if values.len() < cfg.bootstrap_count {
            continue;
        }
        let mean = values.iter().sum::<f64>() / p;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / p;
        stats.mean_lid.push(mean);
        stats.mean_radius.push(radius_sum[k] / p);
        stats.variance.push(var);
    }
    Ok(stats)
}

/// Weighted least squares intercept and coefficients (in distance units).
///
/// The regressor is divided by its largest value before the fit; this leaves
/// the intercept unchanged and keeps the Vandermonde matrix well conditioned.
fn fit_intercept(stats: &BootstrapStats, degree: usize) -> Option<(f64, Vec<f64>)> {
    let rows = stats.mean_lid.len();
    if rows <= degree {
        return None;
    }
    let scale = stats.mean_radius.iter().cloned().fold(0.0, f64::max);
    if scale.is_nan() || scale <= 0.0 {
        return None;
    }
    let mut a = DMatrix::<f64>::zeros(rows, degree + 1);
    let mut b = DVector::<f64>::zeros(rows);
    for r in 0..rows {
        let w = 1.0 / stats.variance[r].max(VARIANCE_FLOOR);
        let sw = w.sqrt();
        let x = stats.mean_radius[r] / scale;
        let mut pow = 1.0;
        for c in 0..=degree {
            a[(r, c)] = sw * pow;
            pow *= x;
        }
        b[r] = sw * stats.mean_lid[r];
    }
    let beta = a.svd(true, true).solve(&b, 1e-14).ok()?;
    if beta.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let coefs = (1..=degree)
        .map(|j| beta[j] / scale.powi(j as i32))
        .collect();
    Some((beta[0], coefs))
}

fn plain_mle(dists: &[f64], usable: &[bool], t: usize, dim: f64) -> Option<f64> {
    let candidates: Vec<(f64, usize)> = dists
        .iter()
        .enumerate()
        .filter(|(r, _)| usable[*r])
        .map(|(r, d)| (*d, r))
        .collect();
    let nearest: Vec<f64> = select_smallest(candidates, t)
        .into_iter()
        .map(|p| p.0)
        .collect();
    super::mle_lid(&nearest).ok().map(|v| v.min(dim))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats_from_line(intercept: f64, slope: f64, radii: &[f64]) -> BootstrapStats {
        BootstrapStats {
            mean_lid: radii.iter().map(|r| intercept + slope * r).collect(),
            mean_radius: radii.to_vec(),
            variance: vec![0.5; radii.len()],
        }
    }

    #[test]
    fn defaults_follow_neighbor_budget() {
        let cfg = GeomleConfig::for_neighbors(500);
        assert_eq!(
            (cfg.t_min, cfg.t_max, cfg.degree, cfg.bootstrap_count),
            (250, 500, 2, 20)
        );
        let cfg = GeomleConfig::for_neighbors(15);
        assert_eq!((cfg.t_min, cfg.t_max), (10, 15));
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn invalid_configs() {
        let base = GeomleConfig::for_neighbors(40);
        let bad = [
            GeomleConfig {
                bootstrap_count: 1,
                ..base.clone()
            },
            GeomleConfig {
                t_min: 40,
                ..base.clone()
            },
            GeomleConfig {
                t_min: 1,
                ..base.clone()
            },
            GeomleConfig {
                degree: 0,
                ..base.clone()
            },
            GeomleConfig {
                t_min: 38,
                t_max: 40,
                degree: 3,
                ..base.clone()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
        assert!(GeomleConfig::for_neighbors(10).validate().is_err());
    }

    #[test]
    fn regression_recovers_exact_intercept() {
        let radii: Vec<f64> = (0..20).map(|i| 2.0 + 0.1 * i as f64).collect();
        let stats = stats_from_line(7.0, -1.5, &radii);
        let (b0, coefs) = fit_intercept(&stats, 1).unwrap();
        assert!((b0 - 7.0).abs() < 1e-9);
        assert!((coefs[0] + 1.5).abs() < 1e-9);
        let (b0, coefs) = fit_intercept(&stats, 2).unwrap();
        assert!((b0 - 7.0).abs() < 1e-7);
        assert!(coefs[1].abs() < 1e-7);
    }

    #[test]
    fn zero_variance_is_floored() {
        let radii: Vec<f64> = (0..10).map(|i| 1.0 + 0.05 * i as f64).collect();
        let mut stats = stats_from_line(4.0, 1.0, &radii);
        stats.variance = vec![0.0; radii.len()];
        let (b0, _) = fit_intercept(&stats, 1).unwrap();
        assert!((b0 - 4.0).abs() < 1e-8);
    }

    #[test]
    fn intercept_is_invariant_to_radius_scale() {
        let radii: Vec<f64> = (0..30).map(|i| 0.8 + 0.02 * i as f64).collect();
        let mut stats = stats_from_line(9.0, -2.0, &radii);
        for (k, m) in stats.mean_lid.iter_mut().enumerate() {
            *m += 0.01 * ((k * 7 % 5) as f64 - 2.0);
        }
        let (a, _) = fit_intercept(&stats, 2).unwrap();
        stats.mean_radius.iter_mut().for_each(|r| *r *= 123.0);
        let (b, _) = fit_intercept(&stats, 2).unwrap();
        assert!(((a - b) / a).abs() < 1e-9);
    }
}
