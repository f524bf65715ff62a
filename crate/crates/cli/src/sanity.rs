use std::process::ExitCode;

use lidkit::estimators::{
    geomle_lid, knn_graph_fit, mean_lid, mle_lid_batch, twonn_global, GeomleConfig, KnnGraphConfig,
    DEFAULT_TRIM_FRACTION,
};
use lidkit::synthetic::generate;
use lidkit::{ManifoldKind, ManifoldSpec};
use serde::Serialize;
use serde_json::json;

use crate::args::SanityArgs;

/// Published TwoNN, KNN, MLE and GeoMLE values for each row.
struct Reference {
    twonn: f64,
    knn: f64,
    mle: f64,
    geomle: f64,
}

struct Row {
    name: &'static str,
    kind: ManifoldKind,
    m: usize,
    noisy: bool,
    reference: Reference,
}

const ROWS: [Row; 4] = [
    Row {
        name: "sphere",
        kind: ManifoldKind::Sphere,
        m: 10,
        noisy: false,
        reference: Reference {
            twonn: 8.78,
            knn: 4.0,
            mle: 8.63,
            geomle: 8.65,
        },
    },
    Row {
        name: "sphere+noise",
        kind: ManifoldKind::Sphere,
        m: 10,
        noisy: true,
        reference: Reference {
            twonn: 13.97,
            knn: 4.0,
            mle: 11.45,
            geomle: 9.64,
        },
    },
    Row {
        name: "norm",
        kind: ManifoldKind::Norm,
        m: 20,
        noisy: false,
        reference: Reference {
            twonn: 17.54,
            knn: 9.0,
            mle: 15.54,
            geomle: 20.33,
        },
    },
    Row {
        name: "norm+noise",
        kind: ManifoldKind::Norm,
        m: 20,
        noisy: true,
        reference: Reference {
            twonn: 17.81,
            knn: 2.0,
            mle: 15.72,
            geomle: 22.36,
        },
    },
];

#[derive(Debug, Clone, Serialize)]
struct Band {
    estimator: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    pass: bool,
}

#[derive(Serialize)]
struct RowResult {
    row: &'static str,
    m: usize,
    twonn: f64,
    knn: Option<usize>,
    knn_slope: Option<f64>,
    knn_error: Option<String>,
    mle: f64,
    geomle: f64,
    geomle_fallbacks: usize,
    reference: serde_json::Value,
    bands: Vec<Band>,
}

fn bands_for(row: &str) -> &'static [(&'static str, f64, f64)] {
    match row {
        "sphere" => &[
            ("mle", 7.5, 10.0),
            ("geomle", 7.5, 10.5),
            ("twonn", 7.8, 9.8),
        ],
        "norm" => &[("geomle", 17.0, 24.0), ("mle", 13.0, 18.0)],
        "sphere+noise" => &[("geomle", 8.0, 12.5)],
        _ => &[],
    }
}

pub fn run(a: SanityArgs) -> anyhow::Result<ExitCode> {
    let (n, ambient, widen) = if a.fast {
        (500, 512, 1.5)
    } else {
        (1000, 4096, 1.0)
    };
    let mut results = Vec::with_capacity(ROWS.len());
    for row in &ROWS {
        let noise = if row.noisy { a.noise } else { 0.0 };
        let spec = ManifoldSpec::new(row.kind, row.m, ambient, n)
            .with_seed(a.seed)
            .with_noise(noise);
        let set = generate(&spec)?;
        log::info!("{}: generated {n} x {ambient}", row.name);

        let twonn = twonn_global(&set, DEFAULT_TRIM_FRACTION)?.dimension;
        let (knn, knn_slope, knn_error) =
            match knn_graph_fit(&set, &KnnGraphConfig::for_size(n).with_seed(a.seed)) {
                Ok(fit) => match fit.dimension() {
                    Ok(d) => (Some((d.round() as usize).max(1)), Some(fit.slope), None),
                    Err(e) => (None, Some(fit.slope), Some(e.to_string())),
                },
                Err(e) => (None, None, Some(e.to_string())),
            };
        let mle = mean_lid(&mle_lid_batch(&set, &set, a.neighbors, true)?)
            .ok_or_else(|| anyhow::anyhow!("{}: every MLE estimate is degenerate", row.name))?;
        let cfg = GeomleConfig::for_neighbors(a.neighbors).with_seed(a.seed);
        let geo = geomle_lid(&set, &set, &cfg, true)?;
        let geomle = mean_lid(&geo)
            .ok_or_else(|| anyhow::anyhow!("{}: every GeoMLE estimate is degenerate", row.name))?;

        let value_of = |name: &str| match name {
            "mle" => mle,
            "geomle" => geomle,
            _ => twonn,
        };
        let bands = bands_for(row.name)
            .iter()
            .map(|&(estimator, lo, hi)| {
                let (lo, hi) = (lo / widen, hi * widen);
                let value = value_of(estimator);
                Band {
                    estimator,
                    value,
                    lo,
                    hi,
                    pass: (lo..=hi).contains(&value),
                }
            })
            .collect();
        results.push(RowResult {
            row: row.name,
            m: row.m,
            twonn,
            knn,
            knn_slope,
            knn_error,
            mle,
            geomle,
            geomle_fallbacks: geo.iter().filter(|e| e.diagnostics.fallback).count(),
            reference: json!({
                "twonn": row.reference.twonn,
                "knn": row.reference.knn,
                "mle": row.reference.mle,
                "geomle": row.reference.geomle,
            }),
            bands,
        });
    }

    print_table(&results);
    let failed: Vec<&Band> = results
        .iter()
        .flat_map(|r| &r.bands)
        .filter(|b| !b.pass)
        .collect();
    println!(
        "{}",
        json!({
            "n": n,
            "D": ambient,
            "T": a.neighbors,
            "noise": a.noise,
            "seed": a.seed,
            "fast": a.fast,
            "rows": results,
            "pass": failed.is_empty(),
        })
    );
    for b in &failed {
        eprintln!(
            "out of band: {} {:.2} not in [{:.2}, {:.2}]",
            b.estimator, b.value, b.lo, b.hi
        );
    }
    Ok(if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn print_table(results: &[RowResult]) {
    eprintln!(
        "{:<13} {:>3} {:>15} {:>9} {:>15} {:>15}",
        "row", "m", "TwoNN (ref)", "KNN (ref)", "MLE (ref)", "GeoMLE (ref)"
    );
    for (r, row) in results.iter().zip(&ROWS) {
        let knn = r.knn.map_or("fail".to_string(), |k| k.to_string());
        let cell = |v: f64, reference: f64| format!("{v:.2} ({reference:.2})");
        eprintln!(
            "{:<13} {:>3} {:>15} {:>9} {:>15} {:>15}",
            r.row,
            r.m,
            cell(r.twonn, row.reference.twonn),
            format!("{knn} ({})", row.reference.knn),
            cell(r.mle, row.reference.mle),
            cell(r.geomle, row.reference.geomle),
        );
    }
}
