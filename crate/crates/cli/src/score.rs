use std::process::ExitCode;

use lidkit::data::{read_samples, write_samples};
use lidkit::truthful::label_samples;
use serde_json::json;

use crate::args::ScoreArgs;
use crate::common::UsageError;

pub fn run(a: ScoreArgs) -> anyhow::Result<ExitCode> {
    if !(a.threshold > 0.0 && a.threshold <= 1.0) {
        return Err(UsageError::new(format!(
            "--threshold must be in (0, 1], got {}",
            a.threshold
        ))
        .into());
    }
    let samples = read_samples(&a.input)?;
    if samples.is_empty() {
        return Err(UsageError::new(format!("{} has no samples", a.input.display())).into());
    }
    let labelled = label_samples(&samples, a.threshold)?;
    let output = a.output.unwrap_or_else(|| a.input.clone());
    write_samples(&labelled, &output)?;

    let truthful = labelled.iter().filter(|s| s.label == Some(1)).count();
    let accuracy = truthful as f64 / labelled.len() as f64;
    println!(
        "{}",
        json!({
            "accuracy": accuracy,
            "n": labelled.len(),
            "truthful": truthful,
            "threshold": a.threshold,
            "output": output,
        })
    );
    Ok(ExitCode::SUCCESS)
}
