use std::fs::File;
use std::io::BufWriter;
use std::process::ExitCode;

use anyhow::Context;
use lidkit::data::{read_activations, read_layer, read_layer_stack, read_samples};
use lidkit::{detect, layer_sweep, EstimatorSettings, Method};
use serde_json::{json, Value};

use crate::args::{DetectArgs, ScoringMethodArg};
use crate::common::{emit, geomle_config, UsageError};

pub fn run(a: DetectArgs) -> anyhow::Result<ExitCode> {
    let settings = match a.method {
        ScoringMethodArg::Mle => EstimatorSettings::mle(a.neighbors),
        ScoringMethodArg::Geomle => EstimatorSettings {
            method: Method::Geomle,
            neighbors: a.neighbors,
            geomle: Some(geomle_config(a.neighbors, &a.geomle, a.seed)?),
        },
    };

    let mut sweep = None;
    let activations = match (&a.activations, &a.layer_dir) {
        (Some(path), _) => read_activations(path)?,
        (None, Some(dir)) => {
            if a.auto_layer {
                let (_, stack) = read_layer_stack(dir)?;
                let s = layer_sweep(&stack, &settings, a.shift)?;
                log::info!(
                    "layer sums {:?}, chose layer {}",
                    s.per_layer_sums,
                    s.chosen_layer
                );
                let set = stack
                    .get(s.chosen_layer)
                    .expect("chosen layer is in the stack")
                    .clone();
                sweep = Some(s);
                set
            } else if let Some(k) = a.layer {
                read_layer(dir, k)?
            } else {
                return Err(UsageError::new("--layer-dir needs --layer or --auto-layer").into());
            }
        }
        (None, None) => unreachable!("clap requires --activations or --layer-dir"),
    };

    let samples = read_samples(&a.samples)?;
    let reference = a.reference.as_ref().map(read_activations).transpose()?;
    let report = detect(&activations, &samples, &settings, reference.as_ref())?;

    if let Some(path) = &a.csv {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        report.write_csv(BufWriter::new(file))?;
    }

    let mut out: Value = serde_json::to_value(&report)?;
    out["run"] = json!({
        "activations": a.activations,
        "layer_dir": a.layer_dir,
        "samples": a.samples,
        "reference": a.reference,
        "shift": a.auto_layer.then_some(a.shift),
        "layer_sums": sweep.as_ref().map(|s| &s.per_layer_sums),
    });
    emit(
        a.output.as_deref(),
        &format!("{}\n", serde_json::to_string_pretty(&out)?),
    )?;
    eprintln!(
        "AUROC {:.4} ({} truthful, {} not){}",
        report.auroc,
        report.n_pos,
        report.n_neg,
        report
            .layer_used
            .map(|k| format!(", layer {k}"))
            .unwrap_or_default()
    );
    Ok(ExitCode::SUCCESS)
}
