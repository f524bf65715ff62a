//! Exact Euclidean k-nearest-neighbor search.
//!
//! Brute force over the reference rows with partial selection, parallel over
//! queries. Distances accumulate in `f64` even though rows are stored as `f32`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::EmbeddingSet;
use crate::error::{LidError, Result};

/// Neighbors at or below this distance are duplicates of the query and dropped.
pub const DUPLICATE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborList {
    pub query_id: String,
    pub neighbor_ids: Vec<String>,
    /// Ascending, all strictly greater than [`DUPLICATE_EPS`].
    pub distances: Vec<f64>,
    /// Reference row of each neighbor.
    #[serde(skip)]
    pub rows: Vec<usize>,
}

impl NeighborList {
    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }
}

const LANES: usize = 8;

pub fn squared_distance(a: &[f32], b: &[f32]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0f64; LANES];
    let mut ca = a.chunks_exact(LANES);
    let mut cb = b.chunks_exact(LANES);
    for (x, y) in (&mut ca).zip(&mut cb) {
        for k in 0..LANES {
            let d = x[k] as f64 - y[k] as f64;
            acc[k] += d * d;
        }
    }
    let mut tail = 0f64;
    for (x, y) in ca.remainder().iter().zip(cb.remainder()) {
        let d = *x as f64 - *y as f64;
        tail += d * d;
    }
    acc.iter().sum::<f64>() + tail
}

pub fn distance(a: &[f32], b: &[f32]) -> f64 {
    squared_distance(a, b).sqrt()
}

/// Distances from `query` to every reference row, in row order.
pub fn distance_row(query: &[f32], reference: &EmbeddingSet) -> Result<Vec<f64>> {
    check_dim(query.len(), reference.dim())?;
    Ok(reference.rows().map(|r| distance(query, r)).collect())
}

/// Full `n x n` distance matrix of `set`, row-major. The diagonal is zero.
pub fn pairwise_distances(set: &EmbeddingSet) -> Vec<f64> {
    let n = set.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = set.row(i);
            (0..n)
                .map(|j| if i == j { 0.0 } else { distance(a, set.row(j)) })
                .collect()
        })
        .collect();
    rows.concat()
}

fn check_dim(found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(LidError::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn check_neighbor_count(t: usize) -> Result<()> {
    if t < 2 {
        return Err(LidError::InvalidParameter(format!(
            "neighbor count T must be at least 2, got {t}"
        )));
    }
    Ok(())
}

/// Orders `(distance, row)` pairs by distance, then by row index.
pub(crate) fn by_distance_then_row(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// The `t` smallest entries of `candidates`, sorted ascending.
pub(crate) fn select_smallest(mut candidates: Vec<(f64, usize)>, t: usize) -> Vec<(f64, usize)> {
    if candidates.len() > t {
        candidates.select_nth_unstable_by(t - 1, by_distance_then_row);
        candidates.truncate(t);
    }
    candidates.sort_unstable_by(by_distance_then_row);
    candidates
}

fn nearest_rows(
    query: &[f32],
    reference: &EmbeddingSet,
    t: usize,
    exclude_row: Option<usize>,
) -> Result<Vec<(f64, usize)>> {
    check_neighbor_count(t)?;
    check_dim(query.len(), reference.dim())?;
    let candidates: Vec<(f64, usize)> = reference
        .rows()
        .enumerate()
        .filter(|(i, _)| Some(*i) != exclude_row)
        .map(|(i, r)| (distance(query, r), i))
        .filter(|(d, _)| *d > DUPLICATE_EPS)
        .collect();
    if candidates.len() < t {
        return Err(LidError::InsufficientNeighbors {
            requested: t,
            usable: candidates.len(),
        });
    }
    Ok(select_smallest(candidates, t))
}

fn to_list(query_id: &str, reference: &EmbeddingSet, picked: Vec<(f64, usize)>) -> NeighborList {
    let (distances, rows): (Vec<f64>, Vec<usize>) = picked.into_iter().unzip();
    NeighborList {
        query_id: query_id.to_owned(),
        neighbor_ids: rows.iter().map(|&r| reference.id(r).to_owned()).collect(),
        distances,
        rows,
    }
}

/// The `t` nearest reference rows to `query`.
///
/// Rows whose id equals `exclude_id` are skipped, as are rows within
/// [`DUPLICATE_EPS`] of the query; the next-nearest rows fill their places.
/// Equal distances are ordered by reference row index.
pub fn knn_query(
    query: &[f32],
    reference: &EmbeddingSet,
    t: usize,
    exclude_id: Option<&str>,
) -> Result<NeighborList> {
    let exclude_row = exclude_id.and_then(|id| reference.position(id));
    let picked = nearest_rows(query, reference, t, exclude_row)?;
    Ok(to_list(exclude_id.unwrap_or_default(), reference, picked))
}

/// Neighbor lists for every query row, in query order.
///
/// With `self_reference` the two sets must be the same population and each
/// query skips its own row. Otherwise nothing is excluded by id.
pub fn knn_all(
    queries: &EmbeddingSet,
    reference: &EmbeddingSet,
    t: usize,
    self_reference: bool,
) -> Result<Vec<NeighborList>> {
    check_neighbor_count(t)?;
    check_dim(queries.dim(), reference.dim())?;
    if self_reference && queries.ids() != reference.ids() {
        return Err(LidError::IdMismatch(
            "self-reference mode needs queries and reference to be the same set".into(),
        ));
    }
    (0..queries.len())
        .into_par_iter()
        .map(|i| {
            let exclude = self_reference.then_some(i);
            let picked = nearest_rows(queries.row(i), reference, t, exclude)?;
            Ok(to_list(queries.id(i), reference, picked))
        })
        .collect()
}
