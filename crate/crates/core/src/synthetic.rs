//! Manifolds with known intrinsic dimension, embedded in a high ambient space.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::{EmbeddingSet, SampleRecord};
use crate::error::{LidError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ManifoldKind {
    /// Uniform on the unit `m`-sphere in `R^(m+1)`.
    Sphere,
    /// Standard Gaussian in `R^m`.
    Norm,
}

impl fmt::Display for ManifoldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ManifoldKind::Sphere => "sphere",
            ManifoldKind::Norm => "norm",
        })
    }
}

impl FromStr for ManifoldKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "sphere" => Ok(ManifoldKind::Sphere),
            "norm" => Ok(ManifoldKind::Norm),
            other => Err(format!("unknown manifold {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifoldSpec {
    pub kind: ManifoldKind,
    pub intrinsic_dim: usize,
    pub ambient_dim: usize,
    pub n: usize,
    /// Standard deviation of the isotropic noise added to every ambient coordinate.
    pub noise_sigma: f64,
    pub rng_seed: u64,
    pub rotate: bool,
}

impl ManifoldSpec {
    pub fn new(kind: ManifoldKind, intrinsic_dim: usize, ambient_dim: usize, n: usize) -> Self {
        Self {
            kind,
            intrinsic_dim,
            ambient_dim,
            n,
            noise_sigma: 0.0,
            rng_seed: 0,
            rotate: true,
        }
    }

    pub fn with_noise(mut self, sigma: f64) -> Self {
        self.noise_sigma = sigma;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_rotation(mut self, rotate: bool) -> Self {
        self.rotate = rotate;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.intrinsic_dim < 1 || self.intrinsic_dim >= self.ambient_dim {
            return Err(LidError::InvalidParameter(format!(
                "need 1 <= m < D, got m = {}, D = {}",
                self.intrinsic_dim, self.ambient_dim
            )));
        }
        // the sphere lives in m + 1 coordinates
        if self.kind == ManifoldKind::Sphere && self.intrinsic_dim + 1 > self.ambient_dim {
            return Err(LidError::InvalidParameter(
                "a sphere of dimension m needs D >= m + 1".into(),
            ));
        }
        if self.n < 1 {
            return Err(LidError::InvalidParameter("n must be at least 1".into()));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(LidError::InvalidParameter(format!(
                "noise sigma must be finite and nonnegative, got {}",
                self.noise_sigma
            )));
        }
        Ok(())
    }

    /// Number of coordinates the noise-free manifold occupies before rotation.
    pub fn support_dim(&self) -> usize {
        match self.kind {
            ManifoldKind::Sphere => self.intrinsic_dim + 1,
            ManifoldKind::Norm => self.intrinsic_dim,
        }
    }
}

/// Generates `spec` regardless of its kind.
pub fn generate(spec: &ManifoldSpec) -> Result<EmbeddingSet> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let rows = sample_rows(spec, &mut rng);
    let ids = EmbeddingSet::numbered_ids(&format!("{}", spec.kind), spec.n);
    Ok(
        EmbeddingSet::from_rows(ids, &rows)?.with_provenance(format!(
            "synthetic {} m={} D={} noise={} seed={}",
            spec.kind, spec.intrinsic_dim, spec.ambient_dim, spec.noise_sigma, spec.rng_seed
        )),
    )
}

pub fn gen_sphere(spec: &ManifoldSpec) -> Result<EmbeddingSet> {
    if spec.kind != ManifoldKind::Sphere {
        return Err(LidError::InvalidParameter("spec kind is not sphere".into()));
    }
    generate(spec)
}

pub fn gen_norm(spec: &ManifoldSpec) -> Result<EmbeddingSet> {
    if spec.kind != ManifoldKind::Norm {
        return Err(LidError::InvalidParameter("spec kind is not norm".into()));
    }
    generate(spec)
}

fn sample_rows(spec: &ManifoldSpec, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let locals = sample_local(spec, rng);
    // drawn after the points so that rotated and unrotated sets share them
    let frame = spec
        .rotate
        .then(|| orthonormal_frame(spec.ambient_dim, spec.support_dim(), rng));
    let mut rows = embed(&locals, frame.as_ref(), spec.ambient_dim);
    add_noise(&mut rows, spec.noise_sigma, rng);
    rows
}

/// Points in the manifold's own `support_dim` coordinates.
fn sample_local(spec: &ManifoldSpec, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let k = spec.support_dim();
    (0..spec.n)
        .map(|_| {
            let mut local: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
            if spec.kind == ManifoldKind::Sphere {
                let norm = local.iter().map(|v| v * v).sum::<f64>().sqrt();
                local.iter_mut().for_each(|v| *v /= norm);
            }
            local
        })
        .collect()
}

/// Maps local coordinates through `frame`, or zero-pads them without one.
fn embed(locals: &[Vec<f64>], frame: Option<&DMatrix<f64>>, d: usize) -> Vec<Vec<f64>> {
    locals
        .iter()
        .map(|local| {
            let mut row = vec![0.0; d];
            match frame {
                Some(f) => {
                    for (c, &coef) in local.iter().enumerate() {
                        for (r, out) in row.iter_mut().enumerate() {
                            *out += f[(r, c)] * coef;
                        }
                    }
                }
                None => row[..local.len()].copy_from_slice(local),
            }
            row
        })
        .collect()
}

fn add_noise(rows: &mut [Vec<f64>], sigma: f64, rng: &mut ChaCha8Rng) {
    if sigma > 0.0 {
        for v in rows.iter_mut().flatten() {
            *v += sigma * rng.sample::<f64, _>(StandardNormal);
        }
    }
}

/// First `k` columns of a Haar-random `d x d` orthogonal matrix.
///
/// These are the `Q` factor of the QR decomposition of a `d x k` Gaussian
/// matrix with column signs fixed by the diagonal of `R`. Only these columns
/// act on points supported in the first `k` coordinates.
pub fn orthonormal_frame(d: usize, k: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(d, k, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..k {
        if r[(c, c)] < 0.0 {
            q.column_mut(c).neg_mut();
        }
    }
    q
}

/// Seed of the subspaces the mixture spheres live in.
const MIXTURE_FRAME_SEED: u64 = 0x4d49_5854;

/// Low-dimensional ("truthful", label 1) and high-dimensional (label 0)
/// spheres mixed together and shuffled.
///
/// Each sphere spans a random subspace that depends only on its dimension
/// and `ambient_dim`, so two mixtures with different seeds share their
/// geometry and differ in the sampled points.
pub fn mixture_benchmark(
    m_low: usize,
    m_high: usize,
    ambient_dim: usize,
    n_each: usize,
    rng_seed: u64,
) -> Result<(EmbeddingSet, Vec<u8>)> {
    if !(m_low < m_high && m_high < ambient_dim) {
        return Err(LidError::InvalidParameter(format!(
            "need m_low < m_high < D, got {m_low}, {m_high}, {ambient_dim}"
        )));
    }
    if n_each < 1 {
        return Err(LidError::InvalidParameter(
            "n_each must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut labelled: Vec<(Vec<f64>, u8)> = Vec::with_capacity(2 * n_each);
    for (m, label) in [(m_low, 1u8), (m_high, 0u8)] {
        let spec = ManifoldSpec::new(ManifoldKind::Sphere, m, ambient_dim, n_each);
        spec.validate()?;
        let mut frame_rng = ChaCha8Rng::seed_from_u64(MIXTURE_FRAME_SEED);
        frame_rng.set_stream(m as u64);
        let frame = orthonormal_frame(ambient_dim, spec.support_dim(), &mut frame_rng);
        let rows = embed(&sample_local(&spec, &mut rng), Some(&frame), ambient_dim);
        labelled.extend(rows.into_iter().map(|r| (r, label)));
    }
    labelled.shuffle(&mut rng);
    let (rows, labels): (Vec<Vec<f64>>, Vec<u8>) = labelled.into_iter().unzip();
    let ids = EmbeddingSet::numbered_ids("mix", rows.len());
    let set = EmbeddingSet::from_rows(ids, &rows)?.with_provenance(format!(
        "mixture m_low={m_low} m_high={m_high} D={ambient_dim} seed={rng_seed}"
    ));
    Ok((set, labels))
}

/// Label records for a synthetic set, in JSONL sample form with empty text.
pub fn label_records(set: &EmbeddingSet, labels: &[u8]) -> Vec<SampleRecord> {
    set.ids()
        .iter()
        .zip(labels)
        .map(|(id, &l)| SampleRecord::new(id.clone(), "", "", "").with_label(l))
        .collect()
}
