#![allow(dead_code)]

use lidkit::EmbeddingSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_set(rng: &mut ChaCha8Rng, n: usize, dim: usize, prefix: &str) -> EmbeddingSet {
    let values: Vec<f32> = (0..n * dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    EmbeddingSet::new(EmbeddingSet::numbered_ids(prefix, n), values, dim).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `(row, distance)` of the `t` nearest rows, from a full sort of every
/// reference distance. Ties go to the lower row.
pub fn brute_force_neighbors(
    query: &[f32],
    reference: &EmbeddingSet,
    t: usize,
    exclude_row: Option<usize>,
) -> Vec<(usize, f64)> {
    let mut all: Vec<(usize, f64)> = (0..reference.len())
        .filter(|r| Some(*r) != exclude_row)
        .map(|r| {
            let d2: f64 = query
                .iter()
                .zip(reference.row(r))
                .map(|(a, b)| (*a as f64 - *b as f64).powi(2))
                .sum();
            (r, d2.sqrt())
        })
        .filter(|(_, d)| *d > 1e-12)
        .collect();
    all.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
    all.truncate(t);
    all
}

/// Probability that a random positive outscores a random negative, ties one half.
pub fn pair_count_auroc(scores: &[f64], labels: &[u8]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &li) in labels.iter().enumerate() {
        if li != 1 {
            continue;
        }
        for (j, &lj) in labels.iter().enumerate() {
            if lj != 0 {
                continue;
            }
            pairs += 1.0;
            if scores[i] > scores[j] {
                wins += 1.0;
            } else if scores[i] == scores[j] {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

/// Full-table LCS.
pub fn lcs_table(a: &[String], b: &[String]) -> usize {
    let mut t = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            t[i][j] = if a[i - 1] == b[j - 1] {
                t[i - 1][j - 1] + 1
            } else {
                t[i - 1][j].max(t[i][j - 1])
            };
        }
    }
    t[a.len()][b.len()]
}

pub fn rouge_oracle(cand: &[String], reference: &[String]) -> f64 {
    if cand.is_empty() || reference.is_empty() {
        return 0.0;
    }
    let l = lcs_table(cand, reference) as f64;
    if l == 0.0 {
        return 0.0;
    }
    let (p, r) = (l / cand.len() as f64, l / reference.len() as f64);
    2.0 * p * r / (p + r)
}

/// `[1/(T-1) sum_{j<T} ln(Q_T/Q_j)]^-1` written out directly.
pub fn mle_oracle(q: &[f64]) -> f64 {
    let t = q.len();
    let s: f64 = (0..t - 1).map(|j| (q[t - 1] / q[j]).ln()).sum();
    1.0 / (s / (t as f64 - 1.0))
}

/// Random `d x d` orthogonal matrix via Gram-Schmidt on Gaussian columns.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<f64>> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<f64> = (0..d)
            .map(|_| rng.sample(rand_distr::StandardNormal))
            .collect();
        for _ in 0..2 {
            for c in &cols {
                let dot: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(c).for_each(|(a, b)| *a -= dot * b);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    cols
}

pub fn rotate(set: &EmbeddingSet, q: &[Vec<f64>]) -> EmbeddingSet {
    set.map_rows(|row| {
        q.iter()
            .map(|col| col.iter().zip(row).map(|(a, b)| a * *b as f64).sum())
            .collect()
    })
    .unwrap()
}

pub fn max_relative_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| ((x - y) / x.abs().max(f64::MIN_POSITIVE)).abs())
        .fold(0.0, f64::max)
}
