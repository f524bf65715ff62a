use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::EstimatorSettings;
use crate::data::LayerStack;
use crate::error::{LidError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerSweep {
    /// Sum of the non-degenerate per-sample LIDs of each usable layer.
    pub per_layer_sums: BTreeMap<u32, f64>,
    pub chosen_layer: u32,
}

/// Layer after the one with the largest summed LID.
///
/// `sums` must be ordered by layer. The shift counts positions in `sums`, so
/// with contiguous layers it adds `shift` to the index. It is clamped to the
/// last layer, and ties go to the earlier layer.
pub fn select_layer(sums: &[(u32, f64)], shift: usize) -> Option<u32> {
    let mut best: Option<(usize, f64)> = None;
    for (pos, &(_, s)) in sums.iter().enumerate() {
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((pos, s));
        }
    }
    let (pos, _) = best?;
    Some(sums[(pos + shift).min(sums.len() - 1)].0)
}

/// Summed LID of every layer of `stack` and the layer chosen from them.
///
/// Each layer is scored against itself. Layers run in parallel; the result
/// does not depend on their completion order. A layer where every sample is
/// degenerate is left out.
pub fn layer_sweep(
    stack: &LayerStack,
    settings: &EstimatorSettings,
    shift: usize,
) -> Result<LayerSweep> {
    if stack.len() < 2 {
        return Err(LidError::InvalidParameter(format!(
            "layer sweep needs at least 2 layers, got {}",
            stack.len()
        )));
    }
    let indices = stack.layer_indices();
    let sums: Vec<Option<f64>> = stack
        .layers()
        .par_iter()
        .map(|layer| {
            let est = settings.estimate(layer, None)?;
            let values: Vec<f64> = est.iter().filter_map(|e| e.value).collect();
            Ok((!values.is_empty()).then(|| values.iter().sum()))
        })
        .collect::<Result<_>>()?;

    let usable: Vec<(u32, f64)> = indices
        .iter()
        .zip(&sums)
        .filter_map(|(&k, s)| {
            if s.is_none() {
                log::warn!("layer {k}: every sample is degenerate, excluded from selection");
            }
            s.map(|s| (k, s))
        })
        .collect();
    let chosen_layer = select_layer(&usable, shift)
        .ok_or_else(|| LidError::Estimation("every layer is degenerate".into()))?;
    Ok(LayerSweep {
        per_layer_sums: usable.into_iter().collect(),
        chosen_layer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_plus_one() {
        assert_eq!(select_layer(&[(0, 5.0), (1, 9.0), (2, 7.0)], 1), Some(2));
    }

    #[test]
    fn clamps_at_final_layer() {
        assert_eq!(select_layer(&[(0, 5.0), (1, 7.0), (2, 9.0)], 1), Some(2));
        assert_eq!(select_layer(&[(0, 5.0), (1, 9.0), (2, 7.0)], 4), Some(2));
    }

    #[test]
    fn ties_go_to_earlier_layer() {
        assert_eq!(
            select_layer(&[(3, 9.0), (4, 9.0), (5, 1.0), (6, 0.0)], 1),
            Some(4)
        );
    }

    #[test]
    fn zero_shift_and_sparse_layers() {
        assert_eq!(select_layer(&[(0, 1.0), (8, 3.0), (16, 2.0)], 0), Some(8));
        assert_eq!(select_layer(&[(0, 1.0), (8, 3.0), (16, 2.0)], 1), Some(16));
        assert_eq!(select_layer(&[], 1), None);
    }
}
