//! Persistence: CSV serialization of witness and hydro series, manifest
//! sidecars with checksums, and atomic file writes.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hydro::MomentSeries;
use crate::observables::WitnessSample;

pub const WITNESS_HEADER: &str = "step,t,D_A,dS_A,asym,q_mean,q2_mean,norm_err";

/// Shortest round-trip decimal form; keeps CSVs diff-able and lossless.
fn fmt(x: f64) -> String {
    format!("{x}")
}

pub fn witness_csv_string(samples: &[WitnessSample]) -> String {
    let mut out = String::with_capacity(64 * (samples.len() + 1));
    out.push_str(WITNESS_HEADER);
    out.push('\n');
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            s.step,
            fmt(s.t),
            fmt(s.trace_distance),
            fmt(s.entropy_deficit),
            fmt(s.asymmetry),
            fmt(s.q_mean),
            fmt(s.q2_mean),
            fmt(s.norm_err),
        ));
    }
    out
}

pub fn hydro_csv_string(series: &MomentSeries) -> String {
    let mut header = String::from("step,t,var_excess,var_excess_err");
    for r in 1..=series.r_max {
        header.push_str(&format!(",c_r{r},c_r{r}_err"));
    }
    header.push_str(",grad_moment,grad_moment_err");

    let mut out = String::with_capacity(64 * (series.times.len() + 1));
    out.push_str(&header);
    out.push('\n');
    for i in 0..series.times.len() {
        out.push_str(&format!("{},{}", series.steps[i], fmt(series.times[i])));
        let (v, e) = series.var_excess[i];
        out.push_str(&format!(",{},{}", fmt(v), fmt(e)));
        for r in 0..series.r_max {
            let (v, e) = series.two_point[r][i];
            out.push_str(&format!(",{},{}", fmt(v), fmt(e)));
        }
        let (v, e) = series.grad_moment[i];
        out.push_str(&format!(",{},{}\n", fmt(v), fmt(e)));
    }
    out
}

/// A parsed numeric CSV with named columns.
#[derive(Debug, Clone)]
pub struct CsvTable {
    pub columns: Vec<String>,
    pub data: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Result<&[f64]> {
        let idx = self
            .columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| {
                Error::Schema(format!(
                    "column {name:?} not found; file has {:?}",
                    self.columns
                ))
            })?;
        Ok(&self.data[idx])
    }

    pub fn n_rows(&self) -> usize {
        self.data.first().map_or(0, |c| c.len())
    }
}

pub fn read_csv(path: &Path) -> Result<CsvTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
    let columns: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut data: Vec<Vec<f64>> = vec![Vec::new(); columns.len()];
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        if record.len() != columns.len() {
            return Err(Error::Schema(format!(
                "{} row {}: {} fields, header has {}",
                path.display(),
                row_idx + 1,
                record.len(),
                columns.len()
            )));
        }
        for (col, field) in data.iter_mut().zip(record.iter()) {
            let v: f64 = field.parse().map_err(|_| {
                Error::Schema(format!(
                    "{} row {}: non-numeric field {field:?}",
                    path.display(),
                    row_idx + 1
                ))
            })?;
            col.push(v);
        }
    }
    Ok(CsvTable { columns, data })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Write-then-rename in the destination directory, so readers never see a
/// partial file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir)?;
    }
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// One named pass/fail check recorded alongside a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// Sidecar describing a data file: the config that produced it, the code
/// version, runtime, invariant checks, and the file's checksum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub wall_seconds: f64,
    pub data_file: String,
    pub sha256: String,
    pub checks: Vec<CheckResult>,
    pub config: toml::Value,
}

impl RunManifest {
    pub fn new<C: Serialize>(
        config: &C,
        data_file: &Path,
        data_bytes: &[u8],
        wall_seconds: f64,
        checks: Vec<CheckResult>,
    ) -> Result<Self> {
        let config =
            toml::Value::try_from(config).map_err(|e| Error::Serialize(e.to_string()))?;
        Ok(Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_seconds,
            data_file: data_file
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
            sha256: sha256_hex(data_bytes),
            checks,
            config,
        })
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub fn manifest_path(data_path: &Path) -> PathBuf {
    let mut name = data_path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    name.push_str(".manifest.toml");
    data_path.with_file_name(name)
}

pub fn write_manifest(data_path: &Path, manifest: &RunManifest) -> Result<()> {
    let text =
        toml::to_string_pretty(manifest).map_err(|e| Error::Serialize(e.to_string()))?;
    atomic_write(&manifest_path(data_path), text.as_bytes())
}

pub fn read_manifest(data_path: &Path) -> Result<RunManifest> {
    let text = std::fs::read_to_string(manifest_path(data_path))?;
    toml::from_str(&text).map_err(|e| Error::Schema(format!("manifest parse: {e}")))
}

/// Re-hash the data file and compare against its manifest.
pub fn verify_manifest(data_path: &Path) -> Result<bool> {
    let manifest = read_manifest(data_path)?;
    let bytes = std::fs::read(data_path)?;
    Ok(sha256_hex(&bytes) == manifest.sha256)
}

/// Write a data file together with its manifest; both writes are atomic.
pub fn write_with_manifest<C: Serialize>(
    data_path: &Path,
    bytes: &[u8],
    config: &C,
    wall_seconds: f64,
    checks: Vec<CheckResult>,
) -> Result<RunManifest> {
    let manifest = RunManifest::new(config, data_path, bytes, wall_seconds, checks)?;
    atomic_write(data_path, bytes)?;
    write_manifest(data_path, &manifest)?;
    Ok(manifest)
}
