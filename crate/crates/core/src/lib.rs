//! Local intrinsic dimension (LID) estimation for embedding sets, and
//! truthfulness detection from the LID of hidden-state activations.

pub mod data;
pub mod error;
pub mod estimators;
pub mod neighbors;
pub mod synthetic;
pub mod truthful;

pub use data::{EmbeddingSet, LayerStack, Manifest, SampleRecord};
pub use error::{LidError, Result};
pub use estimators::{
    geomle_lid, knn_graph_dim, mle_lid, mle_lid_batch, twonn_global, Diagnostics, GeomleConfig,
    KnnGraphConfig, LidEstimate, Method,
};
pub use neighbors::{knn_all, knn_query, NeighborList};
pub use synthetic::{ManifoldKind, ManifoldSpec};
pub use truthful::{
    auroc, detect, label_samples, layer_sweep, rouge_l, DetectionReport, EstimatorSettings,
    LayerSweep,
};
