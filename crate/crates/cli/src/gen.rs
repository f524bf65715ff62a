use std::process::ExitCode;

use anyhow::Context;
use lidkit::data::{write_activations, write_samples};
use lidkit::synthetic::{generate, label_records, mixture_benchmark, ManifoldKind, ManifoldSpec};
use serde_json::json;

use crate::args::{GenArgs, ManifoldArg};
use crate::common::UsageError;

pub fn run(a: GenArgs) -> anyhow::Result<ExitCode> {
    let (set, labels) = match a.manifold {
        ManifoldArg::Sphere | ManifoldArg::Norm => {
            if a.m_high.is_some() || a.labels.is_some() {
                return Err(UsageError::new(
                    "--m-high and --labels only apply to --manifold mixture",
                )
                .into());
            }
            let kind = if a.manifold == ManifoldArg::Sphere {
                ManifoldKind::Sphere
            } else {
                ManifoldKind::Norm
            };
            let spec = ManifoldSpec::new(kind, a.m, a.ambient, a.n)
                .with_noise(a.noise)
                .with_seed(a.seed)
                .with_rotation(!a.no_rotate);
            spec.validate()
                .map_err(|e| UsageError::new(e.to_string()))?;
            (generate(&spec)?, None)
        }
        ManifoldArg::Mixture => {
            let m_high = a
                .m_high
                .ok_or_else(|| UsageError::new("--manifold mixture needs --m-high"))?;
            if a.noise != 0.0 || a.no_rotate {
                return Err(
                    UsageError::new("--noise and --no-rotate do not apply to a mixture").into(),
                );
            }
            let (set, labels) = mixture_benchmark(a.m, m_high, a.ambient, a.n, a.seed)
                .map_err(|e| UsageError::new(e.to_string()))?;
            (set, Some(labels))
        }
    };

    write_activations(&set, &a.output)?;
    if let (Some(path), Some(labels)) = (&a.labels, &labels) {
        write_samples(&label_records(&set, labels), path)
            .with_context(|| format!("writing labels to {}", path.display()))?;
    }
    eprintln!(
        "wrote {} points, D = {}, m = {}, seed = {} to {}",
        set.len(),
        set.dim(),
        a.m,
        a.seed,
        a.output.display()
    );
    println!(
        "{}",
        json!({
            "output": a.output,
            "labels": a.labels,
            "manifold": format!("{:?}", a.manifold).to_lowercase(),
            "n": set.len(),
            "D": set.dim(),
            "m": a.m,
            "m_high": a.m_high,
            "noise": a.noise,
            "seed": a.seed,
            "rotate": !a.no_rotate,
        })
    );
    Ok(ExitCode::SUCCESS)
}
