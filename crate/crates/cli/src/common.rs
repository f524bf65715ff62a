use std::fmt;

/// Invalid flags or input the user has to fix; exits with status 2.
#[derive(Debug)]
pub struct UsageError(String);

impl UsageError {
    pub fn new(msg: impl Into<String>) -> Self {
        Self(msg.into())
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Writes `text` to `path`, or to stdout without one.
pub fn emit(path: Option<&std::path::Path>, text: &str) -> anyhow::Result<()> {
    use anyhow::Context;
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

/// GeoMLE settings from flags, rejected as a usage error when inconsistent.
pub fn geomle_config(
    neighbors: usize,
    args: &crate::args::GeomleArgs,
    seed: u64,
) -> Result<lidkit::GeomleConfig, UsageError> {
    let mut cfg = lidkit::GeomleConfig::for_neighbors(neighbors).with_seed(seed);
    cfg.bootstrap_count = args.bootstrap;
    cfg.degree = args.degree;
    if let Some(t) = args.t_min {
        cfg.t_min = t;
    }
    cfg.validate().map_err(|e| UsageError::new(e.to_string()))?;
    Ok(cfg)
}
