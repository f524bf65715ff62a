//! Intrinsic-dimension estimators.
//!
//! Per-sample: [`mle_lid_batch`] and [`geomle_lid`]. Global baselines used for
//! sanity checks on synthetic manifolds: [`twonn_global`] and [`knn_graph_dim`].

mod geomle;
mod knn_graph;
mod mle;
mod twonn;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use geomle::{geomle_lid, GeomleConfig, VARIANCE_FLOOR};
pub use knn_graph::{knn_graph_dim, knn_graph_fit, KnnGraphConfig, KnnGraphFit};
pub use mle::{mle_lid, mle_lid_batch, mle_lid_from_neighbors};
pub use twonn::{twonn_global, TwoNnFit, DEFAULT_TRIM_FRACTION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Mle,
    Geomle,
    Twonn,
    KnnGraph,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Mle => "mle",
            Method::Geomle => "geomle",
            Method::Twonn => "twonn",
            Method::KnnGraph => "knn_graph",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mle" => Ok(Method::Mle),
            "geomle" => Ok(Method::Geomle),
            "twonn" => Ok(Method::Twonn),
            "knn_graph" | "knn-graph" => Ok(Method::KnnGraph),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Bootstrap variance of the per-T estimates, one entry per regression point.
    pub sigma: Vec<f64>,
    /// Polynomial coefficients of the distance correction, in distance units.
    pub coefficients: Vec<f64>,
    /// The corrected estimate was unusable and plain MLE was reported instead.
    pub fallback: bool,
}

/// Local intrinsic dimension of one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LidEstimate {
    pub sample_id: String,
    /// `None` when every neighbor sits at the same distance.
    pub value: Option<f64>,
    pub method: Method,
    pub neighbors: usize,
    pub diagnostics: Diagnostics,
}

impl LidEstimate {
    pub fn is_degenerate(&self) -> bool {
        self.value.is_none()
    }

    /// Flat record for JSONL output.
    pub fn to_row(&self) -> EstimateRow {
        let sigma = (!self.diagnostics.sigma.is_empty()).then(|| {
            self.diagnostics.sigma.iter().sum::<f64>() / self.diagnostics.sigma.len() as f64
        });
        EstimateRow {
            id: self.sample_id.clone(),
            lid: self.value,
            method: self.method,
            neighbors: self.neighbors,
            fallback: self.diagnostics.fallback,
            sigma,
        }
    }
}

/// `{"id", "lid", "method", "T", "fallback", "sigma"}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub id: String,
    pub lid: Option<f64>,
    pub method: Method,
    #[serde(rename = "T")]
    pub neighbors: usize,
    pub fallback: bool,
    pub sigma: Option<f64>,
}

/// Mean of the non-degenerate estimates, `None` if there are none.
pub fn mean_lid(estimates: &[LidEstimate]) -> Option<f64> {
    let values: Vec<f64> = estimates.iter().filter_map(|e| e.value).collect();
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Mle, Method::Geomle, Method::Twonn, Method::KnnGraph] {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
            assert_eq!(
                serde_json::to_string(&m).unwrap(),
                format!("\"{}\"", m.as_str())
            );
        }
        assert_eq!("knn-graph".parse::<Method>().unwrap(), Method::KnnGraph);
    }

    #[test]
    fn row_has_wire_keys() {
        let est = LidEstimate {
            sample_id: "s1".into(),
            value: Some(3.5),
            method: Method::Geomle,
            neighbors: 50,
            diagnostics: Diagnostics {
                sigma: vec![1.0, 3.0],
                coefficients: vec![0.1, 0.2],
                fallback: false,
            },
        };
        let v: serde_json::Value = serde_json::to_value(est.to_row()).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"id":"s1","lid":3.5,"method":"geomle","T":50,"fallback":false,"sigma":2.0})
        );
    }
}
