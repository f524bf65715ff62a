//! Shared domain types and the on-disk formats.
//!
//! Activations are stored in the `LIDA` binary layout:
//!
//! | bytes   | content                                          |
//! |---------|--------------------------------------------------|
//! | 0..4    | magic `b"LIDA"`                                  |
//! | 4..6    | version, `u16` little-endian (= 1)               |
//! | 6..8    | reserved (= 0)                                   |
//! | 8..16   | `n`, `u64` LE                                    |
//! | 16..24  | `D`, `u64` LE                                    |
//! | 24..32  | id-table length `B`, `u64` LE                    |
//! | 32..    | `B` bytes of newline-separated UTF-8 ids         |
//! | ..      | `n * D` `f32` LE values, row-major               |
//!
//! Sample metadata is newline-delimited JSON, one [`SampleRecord`] per line.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{LidError, Result};

pub const LIDA_MAGIC: [u8; 4] = *b"LIDA";
pub const LIDA_VERSION: u16 = 1;
pub const LIDA_HEADER_LEN: u64 = 32;

/// An `n x D` matrix of representation vectors keyed by sample id.
///
/// Values are kept as `f32`, the precision of the file format, so that a
/// write/read cycle is bit-exact.
#[derive(Debug, Clone)]
pub struct EmbeddingSet {
    ids: Vec<String>,
    values: Vec<f32>,
    dim: usize,
    layer: Option<u32>,
    provenance: String,
}

impl EmbeddingSet {
    /// Builds a set from row-major values, checking every invariant.
    pub fn new(ids: Vec<String>, values: Vec<f32>, dim: usize) -> Result<Self> {
        if ids.is_empty() {
            return Err(LidError::EmptySet);
        }
        if dim == 0 {
            return Err(LidError::InvalidParameter(
                "dimension must be at least 1".into(),
            ));
        }
        if values.len() != ids.len() * dim {
            return Err(LidError::Malformed(format!(
                "{} values do not form {} rows of dimension {}",
                values.len(),
                ids.len(),
                dim
            )));
        }
        validate_ids(&ids)?;
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(LidError::NonFinite {
                row: pos / dim,
                col: pos % dim,
            });
        }
        Ok(Self {
            ids,
            values,
            dim,
            layer: None,
            provenance: String::new(),
        })
    }

    /// Builds a set from `f64` rows, rounding to `f32`.
    pub fn from_rows(ids: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(LidError::DimensionMismatch {
                    expected: dim,
                    found: rows[i].len(),
                });
            }
            values.extend(row.iter().map(|&v| v as f32));
        }
        Self::new(ids, values, dim)
    }

    /// Ids `prefix0, prefix1, ...` for synthetic data.
    pub fn numbered_ids(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    pub fn with_layer(mut self, layer: Option<u32>) -> Self {
        self.layer = layer;
        self
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, row: usize) -> &str {
        &self.ids[row]
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn row(&self, row: usize) -> &[f32] {
        &self.values[row * self.dim..(row + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f32]> {
        self.values.chunks_exact(self.dim)
    }

    pub fn layer(&self) -> Option<u32> {
        self.layer
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    /// Every value multiplied by `factor` (rounded back to `f32`).
    pub fn scaled(&self, factor: f32) -> Result<Self> {
        let values = self.values.iter().map(|v| v * factor).collect();
        Ok(Self::new(self.ids.clone(), values, self.dim)?
            .with_layer(self.layer)
            .with_provenance(self.provenance.clone()))
    }

    /// Applies `f` to every row, producing rows of a possibly different width.
    pub fn map_rows<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&[f32]) -> Vec<f64>,
    {
        let rows: Vec<Vec<f64>> = self.rows().map(&mut f).collect();
        Ok(Self::from_rows(self.ids.clone(), &rows)?
            .with_layer(self.layer)
            .with_provenance(self.provenance.clone()))
    }

    /// Rows reordered by `order` (a permutation of `0..n`).
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let ids = order.iter().map(|&i| self.ids[i].clone()).collect();
        let mut values = Vec::with_capacity(self.values.len());
        for &i in order {
            values.extend_from_slice(self.row(i));
        }
        Ok(Self::new(ids, values, self.dim)?
            .with_layer(self.layer)
            .with_provenance(self.provenance.clone()))
    }

    /// Size in bytes of this set in the LIDA format.
    pub fn encoded_len(&self) -> u64 {
        LIDA_HEADER_LEN + self.id_table().len() as u64 + self.values.len() as u64 * 4
    }

    fn id_table(&self) -> String {
        self.ids.join("\n")
    }
}

/// Equality over ids, shape and the exact bit pattern of every value.
impl PartialEq for EmbeddingSet {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.ids == other.ids
            && self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

fn validate_ids(ids: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(ids.len());
    for id in ids {
        if id.is_empty() {
            return Err(LidError::Malformed("sample ids must be nonempty".into()));
        }
        if id.contains('\n') {
            return Err(LidError::Malformed(format!(
                "sample id {id:?} contains a newline"
            )));
        }
        if !seen.insert(id.as_str()) {
            return Err(LidError::Malformed(format!("duplicate sample id {id:?}")));
        }
    }
    Ok(())
}

/// Serializes `set` into LIDA bytes.
pub fn encode_activations(set: &EmbeddingSet) -> Result<Vec<u8>> {
    if set.is_empty() {
        return Err(LidError::EmptySet);
    }
    if let Some(pos) = set.values.iter().position(|v| !v.is_finite()) {
        return Err(LidError::NonFinite {
            row: pos / set.dim,
            col: pos % set.dim,
        });
    }
    let table = set.id_table();
    let mut out = Vec::with_capacity(set.encoded_len() as usize);
    out.extend_from_slice(&LIDA_MAGIC);
    out.extend_from_slice(&LIDA_VERSION.to_le_bytes());
    out.extend_from_slice(&0u16.to_le_bytes());
    out.extend_from_slice(&(set.len() as u64).to_le_bytes());
    out.extend_from_slice(&(set.dim as u64).to_le_bytes());
    out.extend_from_slice(&(table.len() as u64).to_le_bytes());
    out.extend_from_slice(table.as_bytes());
    for v in &set.values {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

/// Parses LIDA bytes.
pub fn decode_activations(bytes: &[u8]) -> Result<EmbeddingSet> {
    if bytes.len() < LIDA_HEADER_LEN as usize {
        if bytes.len() >= 4 && bytes[..4] != LIDA_MAGIC {
            return Err(LidError::BadMagic(bytes[..4].try_into().unwrap()));
        }
        return Err(LidError::Malformed(format!(
            "file holds {} bytes, shorter than the {LIDA_HEADER_LEN}-byte header",
            bytes.len()
        )));
    }
    let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
    if magic != LIDA_MAGIC {
        return Err(LidError::BadMagic(magic));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != LIDA_VERSION {
        return Err(LidError::VersionMismatch {
            found: version,
            supported: LIDA_VERSION,
        });
    }
    let read_u64 = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
    let n = read_u64(8);
    let dim = read_u64(16);
    let table_len = read_u64(24);
    if n == 0 {
        return Err(LidError::EmptySet);
    }
    if dim == 0 {
        return Err(LidError::Malformed("dimension D is zero".into()));
    }
    let payload_len = n
        .checked_mul(dim)
        .and_then(|c| c.checked_mul(4))
        .ok_or_else(|| LidError::Malformed("n * D overflows".into()))?;
    let expected = LIDA_HEADER_LEN
        .checked_add(table_len)
        .and_then(|c| c.checked_add(payload_len))
        .ok_or_else(|| LidError::Malformed("header sizes overflow".into()))?;
    let found = bytes.len() as u64;
    if found < expected {
        return Err(LidError::TruncatedPayload { expected, found });
    }
    if found > expected {
        return Err(LidError::Malformed(format!(
            "{} trailing bytes after payload",
            found - expected
        )));
    }

    let table_end = (LIDA_HEADER_LEN + table_len) as usize;
    let table = std::str::from_utf8(&bytes[LIDA_HEADER_LEN as usize..table_end])
        .map_err(|e| LidError::Malformed(format!("id table is not UTF-8: {e}")))?;
    let ids: Vec<String> = table.split('\n').map(str::to_owned).collect();
    if ids.len() as u64 != n {
        return Err(LidError::Malformed(format!(
            "id table holds {} ids, header says n = {n}",
            ids.len()
        )));
    }

    let dim = dim as usize;
    let values: Vec<f32> = bytes[table_end..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    EmbeddingSet::new(ids, values, dim)
}

pub fn write_activations(set: &EmbeddingSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_activations(set)?;
    fs::write(path, bytes).map_err(|e| LidError::io(path, e))
}

pub fn read_activations(path: impl AsRef<Path>) -> Result<EmbeddingSet> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| LidError::io(path, e))?;
    decode_activations(&bytes)
}

/// One question/answer pair with an optional truthfulness label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub id: String,
    #[serde(default)]
    pub question: String,
    pub generation: String,
    pub reference: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<u8>,
}

impl SampleRecord {
    pub fn new(
        id: impl Into<String>,
        question: impl Into<String>,
        generation: impl Into<String>,
        reference: impl Into<String>,
    ) -> Self {
        Self {
            id: id.into(),
            question: question.into(),
            generation: generation.into(),
            reference: reference.into(),
            label: None,
        }
    }

    pub fn with_label(mut self, label: u8) -> Self {
        self.label = Some(label);
        self
    }

    pub fn is_truthful(&self) -> Option<bool> {
        self.label.map(|l| l == 1)
    }
}

/// Parses JSONL sample records from a reader; blank lines are skipped.
pub fn parse_samples<R: BufRead>(reader: R) -> Result<Vec<SampleRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| LidError::Sample {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: SampleRecord = serde_json::from_str(&line).map_err(|e| LidError::Sample {
            line: line_no,
            message: e.to_string(),
        })?;
        if record.id.is_empty() {
            return Err(LidError::Sample {
                line: line_no,
                message: "field \"id\" is empty".into(),
            });
        }
        if let Some(label) = record.label {
            if label > 1 {
                return Err(LidError::Sample {
                    line: line_no,
                    message: format!("label must be 0 or 1, found {label}"),
                });
            }
        }
        out.push(record);
    }
    Ok(out)
}

pub fn read_samples(path: impl AsRef<Path>) -> Result<Vec<SampleRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| LidError::io(path, e))?;
    parse_samples(BufReader::new(file))
}

pub fn write_samples_to<W: Write>(samples: &[SampleRecord], mut writer: W) -> std::io::Result<()> {
    for s in samples {
        serde_json::to_writer(&mut writer, s)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}

pub fn write_samples(samples: &[SampleRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| LidError::io(path, e))?;
    write_samples_to(samples, BufWriter::new(file)).map_err(|e| LidError::io(path, e))
}

/// Per-layer activations of one sample population.
#[derive(Debug, Clone)]
pub struct LayerStack {
    layers: Vec<EmbeddingSet>,
}

impl LayerStack {
    /// Layers must carry strictly increasing layer indices and share ids in order.
    pub fn new(layers: Vec<EmbeddingSet>) -> Result<Self> {
        let first = layers.first().ok_or(LidError::EmptySet)?;
        let mut prev: Option<u32> = None;
        for set in &layers {
            let idx = set.layer().ok_or_else(|| {
                LidError::InvalidParameter("every layer in a stack needs a layer index".into())
            })?;
            if prev.is_some_and(|p| idx <= p) {
                return Err(LidError::InvalidParameter(format!(
                    "layer indices must be strictly increasing ({} after {})",
                    idx,
                    prev.unwrap()
                )));
            }
            prev = Some(idx);
            if set.ids() != first.ids() {
                return Err(LidError::IdMismatch(format!(
                    "layer {idx} does not share the ids of layer {}",
                    first.layer().unwrap_or_default()
                )));
            }
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[EmbeddingSet] {
        &self.layers
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn layer_indices(&self) -> Vec<u32> {
        self.layers.iter().filter_map(EmbeddingSet::layer).collect()
    }

    pub fn get(&self, layer: u32) -> Option<&EmbeddingSet> {
        self.layers.iter().find(|s| s.layer() == Some(layer))
    }
}

/// `manifest.json` of a multi-layer dump directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub model: String,
    pub n: usize,
    #[serde(rename = "D")]
    pub dim: usize,
    pub layers: Vec<u32>,
    pub token_position: i64,
}

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn layer_file_name(layer: u32) -> String {
    format!("layer_{layer}.bin")
}

pub fn read_manifest(dir: impl AsRef<Path>) -> Result<Manifest> {
    let path = dir.as_ref().join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(|e| LidError::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| LidError::Malformed(format!("{}: {e}", path.display())))
}

/// Loads a single layer of a dump directory.
pub fn read_layer(dir: impl AsRef<Path>, layer: u32) -> Result<EmbeddingSet> {
    let set = read_activations(dir.as_ref().join(layer_file_name(layer)))?;
    Ok(set.with_layer(Some(layer)))
}

/// Loads every layer listed in the manifest and checks it against the manifest.
pub fn read_layer_stack(dir: impl AsRef<Path>) -> Result<(Manifest, LayerStack)> {
    let dir = dir.as_ref();
    let manifest = read_manifest(dir)?;
    let mut layers = Vec::with_capacity(manifest.layers.len());
    for &k in &manifest.layers {
        let set = read_layer(dir, k)?.with_provenance(manifest.model.clone());
        if set.len() != manifest.n || set.dim() != manifest.dim {
            return Err(LidError::Malformed(format!(
                "layer {k} has shape {}x{}, manifest says {}x{}",
                set.len(),
                set.dim(),
                manifest.n,
                manifest.dim
            )));
        }
        layers.push(set);
    }
    Ok((manifest, LayerStack::new(layers)?))
}

pub fn write_layer_stack(
    stack: &LayerStack,
    dir: impl AsRef<Path>,
    model: &str,
    token_position: i64,
) -> Result<Manifest> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| LidError::io(dir, e))?;
    for set in stack.layers() {
        let k = set.layer().expect("stack layers carry indices");
        write_activations(set, dir.join(layer_file_name(k)))?;
    }
    let first = &stack.layers()[0];
    let manifest = Manifest {
        model: model.to_owned(),
        n: first.len(),
        dim: first.dim(),
        layers: stack.layer_indices(),
        token_position,
    };
    let path = dir.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, text).map_err(|e| LidError::io(&path, e))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn small_matrix_round_trips() {
        let set = EmbeddingSet::new(ids(&["a", "b"]), vec![0., 0., 0., 1., 2., 3.], 3).unwrap();
        let back = decode_activations(&encode_activations(&set).unwrap()).unwrap();
        assert_eq!(back, set);
        assert_eq!(back.row(1), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn empty_set_is_rejected() {
        let err = EmbeddingSet::new(vec![], vec![], 3).unwrap_err();
        assert_eq!(err.to_string(), "empty set");
    }

    #[test]
    fn non_finite_values_are_rejected() {
        let err = EmbeddingSet::new(ids(&["a"]), vec![1.0, f32::NAN], 2).unwrap_err();
        assert!(matches!(err, LidError::NonFinite { row: 0, col: 1 }));
        let err = EmbeddingSet::new(ids(&["a"]), vec![f32::INFINITY, 0.0], 2).unwrap_err();
        assert!(matches!(err, LidError::NonFinite { row: 0, col: 0 }));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        assert!(EmbeddingSet::new(ids(&["a", "a"]), vec![0.0, 1.0], 1).is_err());
    }

    fn minimal_file(magic: &[u8; 4], version: u16, payload: &[f32]) -> Vec<u8> {
        let mut b = Vec::new();
        b.extend_from_slice(magic);
        b.extend_from_slice(&version.to_le_bytes());
        b.extend_from_slice(&[0, 0]);
        b.extend_from_slice(&1u64.to_le_bytes());
        b.extend_from_slice(&2u64.to_le_bytes());
        b.extend_from_slice(&2u64.to_le_bytes());
        b.extend_from_slice(b"q1");
        for v in payload {
            b.extend_from_slice(&v.to_le_bytes());
        }
        b
    }

    #[test]
    fn minimal_valid_file_parses() {
        let set = decode_activations(&minimal_file(b"LIDA", 1, &[1.0, 2.0])).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.dim(), 2);
        assert_eq!(set.ids(), &["q1".to_string()]);
        assert_eq!(set.row(0), &[1.0, 2.0]);
    }

    #[test]
    fn bad_magic() {
        let err = decode_activations(&minimal_file(b"XXXX", 1, &[1.0, 2.0])).unwrap_err();
        assert!(err.to_string().starts_with("bad magic"));
    }

    #[test]
    fn version_mismatch() {
        let err = decode_activations(&minimal_file(b"LIDA", 2, &[1.0, 2.0])).unwrap_err();
        assert!(matches!(err, LidError::VersionMismatch { found: 2, .. }));
    }

    #[test]
    fn truncated_payload() {
        let mut bytes = minimal_file(b"LIDA", 1, &[1.0, 2.0]);
        bytes.truncate(bytes.len() - 7);
        let err = decode_activations(&bytes).unwrap_err();
        assert!(err.to_string().starts_with("truncated payload"));
    }

    #[test]
    fn nan_in_payload_is_reported() {
        let err = decode_activations(&minimal_file(b"LIDA", 1, &[1.0, f32::NAN])).unwrap_err();
        assert!(matches!(err, LidError::NonFinite { .. }));
    }

    #[test]
    fn file_size_matches_header_plus_payload() {
        let set = EmbeddingSet::new(ids(&["x", "yy", "zzz"]), vec![0.5; 12], 4).unwrap();
        let bytes = encode_activations(&set).unwrap();
        assert_eq!(bytes.len() as u64, set.encoded_len());
        assert_eq!(bytes.len(), 32 + "x\nyy\nzzz".len() + 3 * 4 * 4);
    }

    #[test]
    fn minimal_sample_record() {
        let line = r#"{"id":"q1","question":"who?","generation":"a","reference":"a"}"#;
        let recs = parse_samples(line.as_bytes()).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].label, None);
        assert_eq!(recs[0].generation, "a");
    }

    #[test]
    fn missing_reference_names_line() {
        let text = "{\"id\":\"q1\",\"generation\":\"a\",\"reference\":\"a\"}\n{\"id\":\"q2\",\"generation\":\"b\"}\n";
        let err = parse_samples(text.as_bytes()).unwrap_err();
        match err {
            LidError::Sample { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("reference"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_json_and_bad_label() {
        assert!(matches!(
            parse_samples("{not json".as_bytes()),
            Err(LidError::Sample { line: 1, .. })
        ));
        let text = r#"{"id":"q","generation":"a","reference":"a","label":2}"#;
        assert!(matches!(
            parse_samples(text.as_bytes()),
            Err(LidError::Sample { line: 1, .. })
        ));
    }

    #[test]
    fn many_samples_keep_order() {
        let samples: Vec<SampleRecord> = (0..2000)
            .map(|i| SampleRecord::new(format!("s{i}"), "q", "g", "r").with_label((i % 2) as u8))
            .collect();
        let mut buf = Vec::new();
        write_samples_to(&samples, &mut buf).unwrap();
        let back = parse_samples(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 2000);
        assert_eq!(back, samples);
    }

    #[test]
    fn layer_stack_requires_increasing_indices() {
        let base = EmbeddingSet::new(ids(&["a", "b"]), vec![0.0, 1.0], 1).unwrap();
        let l0 = base.clone().with_layer(Some(3));
        let l1 = base.clone().with_layer(Some(1));
        assert!(LayerStack::new(vec![l0.clone(), l1]).is_err());
        let l2 = base.with_layer(Some(4));
        assert_eq!(
            LayerStack::new(vec![l0, l2]).unwrap().layer_indices(),
            vec![3, 4]
        );
    }

    #[test]
    fn layer_dir_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let a = EmbeddingSet::new(ids(&["a", "b"]), vec![0.0, 1.0, 2.0, 3.0], 2).unwrap();
        let stack = LayerStack::new(vec![
            a.clone().with_layer(Some(0)),
            a.scaled(2.0).unwrap().with_layer(Some(5)),
        ])
        .unwrap();
        let manifest = write_layer_stack(&stack, dir.path(), "toy", -1).unwrap();
        assert_eq!(manifest.layers, vec![0, 5]);
        assert!(dir.path().join("layer_5.bin").exists());
        let (m, back) = read_layer_stack(dir.path()).unwrap();
        assert_eq!(m, manifest);
        assert_eq!(back.layers()[1], stack.layers()[1]);
        assert_eq!(back.get(5).unwrap().layer(), Some(5));
    }
}
