use serde::{Deserialize, Serialize};

use crate::data::EmbeddingSet;
use crate::error::{LidError, Result};
use crate::estimators::{geomle_lid, mle_lid_batch, GeomleConfig, LidEstimate, Method};

/// Per-sample estimator used for scoring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimatorSettings {
    pub method: Method,
    #[serde(rename = "T")]
    pub neighbors: usize,
    /// Only used by GeoMLE; derived from `neighbors` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geomle: Option<GeomleConfig>,
}

impl EstimatorSettings {
    pub fn mle(neighbors: usize) -> Self {
        Self {
            method: Method::Mle,
            neighbors,
            geomle: None,
        }
    }

    pub fn geomle(neighbors: usize, rng_seed: u64) -> Self {
        Self {
            method: Method::Geomle,
            neighbors,
            geomle: Some(GeomleConfig::for_neighbors(neighbors).with_seed(rng_seed)),
        }
    }

    pub fn geomle_config(&self) -> GeomleConfig {
        self.geomle
            .clone()
            .unwrap_or_else(|| GeomleConfig::for_neighbors(self.neighbors))
    }

    /// Estimates for every query. Without `reference` the queries are their
    /// own neighbor pool and each skips itself.
    pub fn estimate(
        &self,
        queries: &EmbeddingSet,
        reference: Option<&EmbeddingSet>,
    ) -> Result<Vec<LidEstimate>> {
        let (pool, self_reference) = match reference {
            Some(r) => (r, false),
            None => (queries, true),
        };
        match self.method {
            Method::Mle => mle_lid_batch(queries, pool, self.neighbors, self_reference),
            Method::Geomle => geomle_lid(queries, pool, &self.geomle_config(), self_reference),
            other => Err(LidError::InvalidParameter(format!(
                "{other} is a global estimator and cannot score samples"
            ))),
        }
    }
}
