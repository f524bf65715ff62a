use rayon::prelude::*;

use super::{Diagnostics, LidEstimate, Method};
use crate::data::EmbeddingSet;
use crate::error::{LidError, Result};
use crate::neighbors::{knn_all, NeighborList};

/// Maximum-likelihood LID from ascending neighbor distances `Q_1..Q_T`:
///
/// `m = [ 1/(T-1) * sum_{j<T} ln(Q_T / Q_j) ]^-1`
pub fn mle_lid(distances: &[f64]) -> Result<f64> {
    let t = distances.len();
    if t < 2 {
        return Err(LidError::InvalidDistances(format!(
            "need at least 2 distances, got {t}"
        )));
    }
    if let Some(bad) = distances.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
        return Err(LidError::InvalidDistances(format!(
            "distances must be positive and finite, found {bad}"
        )));
    }
    if distances.windows(2).any(|w| w[1] < w[0]) {
        return Err(LidError::InvalidDistances(
            "distances must be ascending".into(),
        ));
    }
    let far = distances[t - 1];
    let log_sum: f64 = distances[..t - 1].iter().map(|q| (far / q).ln()).sum();
    if log_sum <= 0.0 {
        return Err(LidError::DegenerateNeighborhood);
    }
    Ok((t - 1) as f64 / log_sum)
}

/// Per-sample estimate from one neighbor list; degenerate neighborhoods yield
/// `value: None`. Values are capped at the ambient dimension `dim`.
pub fn mle_lid_from_neighbors(list: &NeighborList, dim: usize) -> Result<LidEstimate> {
    let value = match mle_lid(&list.distances) {
        Ok(v) => Some(v.min(dim as f64)),
        Err(LidError::DegenerateNeighborhood) => {
            log::warn!("degenerate neighborhood for sample {}", list.query_id);
            None
        }
        Err(e) => return Err(e),
    };
    Ok(LidEstimate {
        sample_id: list.query_id.clone(),
        value,
        method: Method::Mle,
        neighbors: list.len(),
        diagnostics: Diagnostics::default(),
    })
}

/// MLE estimate for every query row using its `t` nearest reference rows.
pub fn mle_lid_batch(
    queries: &EmbeddingSet,
    reference: &EmbeddingSet,
    t: usize,
    self_reference: bool,
) -> Result<Vec<LidEstimate>> {
    let lists = knn_all(queries, reference, t, self_reference)?;
    lists
        .par_iter()
        .map(|l| mle_lid_from_neighbors(l, reference.dim()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn closed_form_by_hand() {
        let m = mle_lid(&[1.0, E, E * E]).unwrap();
        assert!((m - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn equal_distances_are_degenerate() {
        assert!(matches!(
            mle_lid(&[5.0, 5.0, 5.0]),
            Err(LidError::DegenerateNeighborhood)
        ));
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(
            mle_lid(&[1.0]),
            Err(LidError::InvalidDistances(_))
        ));
        assert!(matches!(
            mle_lid(&[0.0, 1.0]),
            Err(LidError::InvalidDistances(_))
        ));
        assert!(matches!(
            mle_lid(&[-1.0, 1.0]),
            Err(LidError::InvalidDistances(_))
        ));
        assert!(matches!(
            mle_lid(&[2.0, 1.0]),
            Err(LidError::InvalidDistances(_))
        ));
        assert!(matches!(
            mle_lid(&[1.0, f64::NAN]),
            Err(LidError::InvalidDistances(_))
        ));
    }

    #[test]
    fn argument_scale_invariance() {
        let q = [0.3, 0.41, 0.5, 0.77, 0.9, 1.3];
        let base = mle_lid(&q).unwrap();
        for c in [1e-3, 3.7, 250.0] {
            let scaled: Vec<f64> = q.iter().map(|x| x * c).collect();
            let m = mle_lid(&scaled).unwrap();
            assert!(((m - base) / base).abs() < 1e-9, "c = {c}");
        }
    }

    #[test]
    fn batch_flags_degenerate_samples() {
        // "a" sees b and c at the same distance
        let set = EmbeddingSet::new(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![0.0, 1.0, -1.0, 7.0],
            1,
        )
        .unwrap();
        let est = mle_lid_batch(&set, &set, 2, true).unwrap();
        assert!(est[0].is_degenerate());
        assert!(!est[3].is_degenerate());
        assert_eq!(est.len(), 4);
    }
}
