use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{auroc, EstimatorSettings};
use crate::data::{EmbeddingSet, SampleRecord};
use crate::error::{LidError, Result};

/// Everything that determined a detection run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    #[serde(flatten)]
    pub estimator: EstimatorSettings,
    /// Neighbors came from a separate reference set instead of the queries.
    pub cross_reference: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_provenance: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleScore {
    pub id: String,
    pub lid: f64,
    /// `-lid`: higher means more likely truthful.
    pub score: f64,
    pub label: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub auroc: f64,
    pub n_pos: usize,
    pub n_neg: usize,
    pub per_sample: Vec<SampleScore>,
    pub layer_used: Option<u32>,
    pub config: DetectionConfig,
}

impl DetectionReport {
    /// `id,lid,score,label` rows with a header.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for row in &self.per_sample {
            w.serialize(row).map_err(csv_error)?;
        }
        w.flush().map_err(|e| LidError::io("<csv>", e))
    }
}

fn csv_error(e: csv::Error) -> LidError {
    LidError::Malformed(format!("csv: {e}"))
}

/// Scores each activation row by `-LID` and evaluates the scores against the
/// sample labels (1 = truthful).
///
/// Every activation id needs exactly one labelled sample and vice versa.
/// With `reference`, neighbors are drawn from it and no query is excluded;
/// otherwise the activations are their own neighbor pool.
pub fn detect(
    activations: &EmbeddingSet,
    samples: &[SampleRecord],
    settings: &EstimatorSettings,
    reference: Option<&EmbeddingSet>,
) -> Result<DetectionReport> {
    let labels = align_labels(activations, samples)?;
    let estimates = settings.estimate(activations, reference)?;

    let mut per_sample = Vec::with_capacity(estimates.len());
    for (est, &label) in estimates.iter().zip(&labels) {
        let lid = est.value.ok_or_else(|| {
            LidError::Estimation(format!(
                "degenerate neighborhood for sample {}",
                est.sample_id
            ))
        })?;
        per_sample.push(SampleScore {
            id: est.sample_id.clone(),
            lid,
            score: -lid,
            label,
        });
    }
    let scores: Vec<f64> = per_sample.iter().map(|s| s.score).collect();
    let auroc = auroc(&scores, &labels)?;
    let n_pos = labels.iter().filter(|l| **l == 1).count();
    Ok(DetectionReport {
        auroc,
        n_pos,
        n_neg: labels.len() - n_pos,
        per_sample,
        layer_used: activations.layer(),
        config: DetectionConfig {
            estimator: settings.clone(),
            cross_reference: reference.is_some(),
            reference_provenance: reference
                .map(|r| r.provenance().to_owned())
                .filter(|p| !p.is_empty()),
        },
    })
}

/// Labels in activation row order.
fn align_labels(activations: &EmbeddingSet, samples: &[SampleRecord]) -> Result<Vec<u8>> {
    let mut by_id: HashMap<&str, &SampleRecord> = HashMap::with_capacity(samples.len());
    for s in samples {
        if by_id.insert(s.id.as_str(), s).is_some() {
            return Err(LidError::IdMismatch(format!(
                "duplicate sample id {:?}",
                s.id
            )));
        }
    }
    if samples.len() != activations.len() {
        return Err(LidError::IdMismatch(format!(
            "{} activation rows but {} samples",
            activations.len(),
            samples.len()
        )));
    }
    activations
        .ids()
        .iter()
        .map(|id| {
            let s = by_id
                .get(id.as_str())
                .ok_or_else(|| LidError::IdMismatch(format!("no sample for activation {id:?}")))?;
            s.label.ok_or_else(|| LidError::MissingLabel(id.clone()))
        })
        .collect()
}
