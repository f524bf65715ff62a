use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::EmbeddingSet;
use crate::error::{LidError, Result};
use crate::neighbors::{pairwise_distances, DUPLICATE_EPS};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnnGraphConfig {
    pub k: usize,
    pub subset_sizes: Vec<usize>,
    pub trials: usize,
    pub rng_seed: u64,
}

impl KnnGraphConfig {
    /// `k = 5`, 5 trials, 10 geometrically spaced subset sizes in `[n/10, n]`.
    pub fn for_size(n: usize) -> Self {
        let lo = (n / 10).max(8) as f64;
        let hi = n as f64;
        let mut sizes: Vec<usize> = (0..10)
            .map(|i| (lo * (hi / lo).powf(i as f64 / 9.0)).round() as usize)
            .map(|s| s.min(n))
            .collect();
        sizes.dedup();
        Self {
            k: 5,
            subset_sizes: sizes,
            trials: 5,
            rng_seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }
}

/// Least-squares fit of `ln L(s) = a + b ln s` over subset sizes `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnGraphFit {
    pub subset_sizes: Vec<usize>,
    /// Mean total kNN-graph edge length per subset size.
    pub lengths: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
}

impl KnnGraphFit {
    /// `d` solving `b = (d - 1) / d`, defined for slopes in `(0, 1)`.
    pub fn dimension(&self) -> Result<f64> {
        if !(self.slope > 0.0 && self.slope < 1.0) {
            return Err(LidError::SlopeOutOfRange { slope: self.slope });
        }
        Ok(1.0 / (1.0 - self.slope))
    }
}

pub fn knn_graph_fit(set: &EmbeddingSet, cfg: &KnnGraphConfig) -> Result<KnnGraphFit> {
    let n = set.len();
    if cfg.k < 1 || cfg.trials < 1 {
        return Err(LidError::InvalidParameter(
            "k and trials must be at least 1".into(),
        ));
    }
    if cfg.subset_sizes.len() < 2 {
        return Err(LidError::InvalidParameter(
            "need at least two subset sizes".into(),
        ));
    }
    if cfg.subset_sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LidError::InvalidParameter(
            "subset sizes must be ascending".into(),
        ));
    }
    let smallest = cfg.subset_sizes[0];
    let largest = *cfg.subset_sizes.last().unwrap();
    if largest > n || smallest <= cfg.k {
        return Err(LidError::InvalidParameter(format!(
            "subset sizes must lie in ({}, {n}]",
            cfg.k
        )));
    }

    let dist = pairwise_distances(set);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut lengths = Vec::with_capacity(cfg.subset_sizes.len());
    for &s in &cfg.subset_sizes {
        let mut total = 0.0;
        for _ in 0..cfg.trials {
            let subset = sample(&mut rng, n, s).into_vec();
            total += graph_length(&dist, n, &subset, cfg.k);
        }
        lengths.push(total / cfg.trials as f64);
    }

    let xs: Vec<f64> = cfg.subset_sizes.iter().map(|&s| (s as f64).ln()).collect();
    let ys: Vec<f64> = lengths.iter().map(|l| l.ln()).collect();
    let (intercept, slope) = least_squares_line(&xs, &ys);
    Ok(KnnGraphFit {
        subset_sizes: cfg.subset_sizes.clone(),
        lengths,
        slope,
        intercept,
    })
}

/// Nearest positive integer dimension from the kNN-graph length growth rate.
pub fn knn_graph_dim(set: &EmbeddingSet, cfg: &KnnGraphConfig) -> Result<usize> {
    let d = knn_graph_fit(set, cfg)?.dimension()?;
    Ok((d.round() as usize).max(1))
}

fn graph_length(dist: &[f64], n: usize, subset: &[usize], k: usize) -> f64 {
    let mut total = 0.0;
    let mut row = Vec::with_capacity(subset.len());
    for &i in subset {
        row.clear();
        row.extend(
            subset
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| dist[i * n + j])
                .filter(|d| *d > DUPLICATE_EPS),
        );
        let k = k.min(row.len());
        if k == 0 {
            continue;
        }
        row.select_nth_unstable_by(k - 1, f64::total_cmp);
        total += row[..k].iter().sum::<f64>();
    }
    total
}

fn least_squares_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (my - slope * mx, slope)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_fit_is_exact_on_a_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 + 0.75 * x).collect();
        let (a, b) = least_squares_line(&xs, &ys);
        assert!((a - 0.5).abs() < 1e-12 && (b - 0.75).abs() < 1e-12);
    }

    #[test]
    fn slope_range_is_enforced() {
        let fit = |slope| KnnGraphFit {
            subset_sizes: vec![],
            lengths: vec![],
            slope,
            intercept: 0.0,
        };
        assert!(matches!(
            fit(1.0).dimension(),
            Err(LidError::SlopeOutOfRange { .. })
        ));
        assert!(matches!(
            fit(-0.1).dimension(),
            Err(LidError::SlopeOutOfRange { .. })
        ));
        assert!((fit(0.5).dimension().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn default_sizes_are_ascending_and_bounded() {
        let cfg = KnnGraphConfig::for_size(1000);
        assert_eq!(cfg.subset_sizes.first(), Some(&100));
        assert_eq!(cfg.subset_sizes.last(), Some(&1000));
        assert!(cfg.subset_sizes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_sizes() {
        let set = EmbeddingSet::new(
            (0..20).map(|i| format!("p{i}")).collect(),
            (0..20).map(|i| i as f32).collect(),
            1,
        )
        .unwrap();
        let cfg = KnnGraphConfig {
            k: 2,
            subset_sizes: vec![10, 30],
            trials: 1,
            rng_seed: 0,
        };
        assert!(knn_graph_fit(&set, &cfg).is_err());
        let cfg = KnnGraphConfig {
            subset_sizes: vec![15, 10],
            ..cfg
        };
        assert!(knn_graph_fit(&set, &cfg).is_err());
    }
}
