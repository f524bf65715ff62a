use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use lidkit::data::read_activations;
use lidkit::estimators::{
    geomle_lid, knn_graph_fit, mle_lid_batch, twonn_global, EstimateRow, KnnGraphConfig, Method,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{EstimateArgs, MethodArg};
use crate::common::{emit, geomle_config, UsageError};

#[derive(Serialize)]
struct Summary {
    method: Method,
    n: usize,
    mean: Option<f64>,
    degenerate: usize,
    fallbacks: usize,
    details: Value,
    config: RunConfig,
}

#[derive(Serialize)]
struct RunConfig {
    input: PathBuf,
    reference: Option<PathBuf>,
    #[serde(rename = "T")]
    neighbors: usize,
    seed: u64,
    settings: Value,
}

pub fn run(a: EstimateArgs) -> anyhow::Result<ExitCode> {
    let set = read_activations(&a.input)?;
    let reference = a.reference.as_ref().map(read_activations).transpose()?;
    let pool = reference.as_ref().unwrap_or(&set);
    let self_reference = reference.is_none();

    let method = match a.method {
        MethodArg::Mle => Method::Mle,
        MethodArg::Geomle => Method::Geomle,
        MethodArg::Twonn => Method::Twonn,
        MethodArg::KnnGraph => Method::KnnGraph,
    };
    let global = matches!(method, Method::Twonn | Method::KnnGraph);
    if global && reference.is_some() {
        return Err(UsageError::new(format!("--reference does not apply to {method}")).into());
    }

    let (rows, settings, details): (Vec<EstimateRow>, Value, Value) = match method {
        Method::Mle => {
            let est = mle_lid_batch(&set, pool, a.neighbors, self_reference)?;
            (
                est.iter().map(|e| e.to_row()).collect(),
                json!({}),
                Value::Null,
            )
        }
        Method::Geomle => {
            let cfg = geomle_config(a.neighbors, &a.geomle, a.seed)?;
            let est = geomle_lid(&set, pool, &cfg, self_reference)?;
            (
                est.iter().map(|e| e.to_row()).collect(),
                json!(cfg),
                Value::Null,
            )
        }
        Method::Twonn => {
            let fit = twonn_global(&set, a.trim)?;
            let row = global_row(fit.dimension, method, 2);
            (vec![row], json!({ "trim": a.trim }), json!(fit))
        }
        Method::KnnGraph => {
            let mut cfg = KnnGraphConfig::for_size(set.len()).with_seed(a.seed);
            cfg.k = a.k;
            cfg.trials = a.trials;
            let fit = knn_graph_fit(&set, &cfg)?;
            let dim = fit.dimension()?;
            let row = global_row((dim.round()).max(1.0), method, a.k);
            (
                vec![row],
                json!(cfg),
                json!({ "fit": fit, "dimension": dim }),
            )
        }
    };

    let values: Vec<f64> = rows.iter().filter_map(|r| r.lid).collect();
    let mean = (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64);
    let summary = Summary {
        method,
        n: set.len(),
        mean: if global {
            values.first().copied()
        } else {
            mean
        },
        degenerate: rows.iter().filter(|r| r.lid.is_none()).count(),
        fallbacks: rows.iter().filter(|r| r.fallback).count(),
        details,
        config: RunConfig {
            input: a.input.clone(),
            reference: a.reference.clone(),
            neighbors: a.neighbors,
            seed: a.seed,
            settings,
        },
    };

    let mut out = String::new();
    for row in &rows {
        writeln!(out, "{}", serde_json::to_string(row)?)?;
    }
    writeln!(out, "{}", json!({ "summary": summary }))?;
    emit(a.output.as_deref(), &out)?;
    if let Some(m) = summary.mean {
        eprintln!("{method}: mean LID {m:.4} over {} samples", set.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn global_row(value: f64, method: Method, neighbors: usize) -> EstimateRow {
    EstimateRow {
        id: "global".into(),
        lid: Some(value),
        method,
        neighbors,
        fallback: false,
        sigma: None,
    }
}
