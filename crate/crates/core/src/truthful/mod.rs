//! Truthfulness labels, AUROC, layer selection and LID-based detection.

mod auroc;
mod detect;
mod layers;
mod rouge;
mod settings;

pub use auroc::auroc;
pub use detect::{detect, DetectionConfig, DetectionReport, SampleScore};
pub use layers::{layer_sweep, select_layer, LayerSweep};
pub use rouge::{label_samples, lcs_len, rouge_l, rouge_l_tokens, tokenize};
pub use settings::EstimatorSettings;
