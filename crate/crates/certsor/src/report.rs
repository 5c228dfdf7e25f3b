//! JSON documents written next to binary outputs.

use std::collections::BTreeMap;
use std::hash::Hasher;
use std::path::{Path, PathBuf};

use certsor_core::{SolveCertificate, SuitableResult};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::formats::{read_file, write_file};

/// FNV-1a 64-bit digest of a byte string, as 16 lowercase hex digits.
pub fn fnv64_hex(bytes: &[u8]) -> String {
    let mut h = fnv::FnvHasher::default();
    h.write(bytes);
    format!("{:016x}", h.finish())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub bytes: u64,
    pub fnv64: String,
}

impl InputDigest {
    pub fn of_file(path: &Path) -> Result<Self> {
        let bytes = read_file(path)?;
        Ok(InputDigest { path: path.to_path_buf(), bytes: bytes.len() as u64, fnv64: fnv64_hex(&bytes) })
    }
}

/// Provenance of one command invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub inputs: Vec<InputDigest>,
    pub parameters: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub outputs: Vec<PathBuf>,
    pub wall_clock_ms: f64,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: Vec::new(),
            parameters: BTreeMap::new(),
            seed: None,
            outputs: Vec::new(),
            wall_clock_ms: 0.0,
        }
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        self.inputs.push(InputDigest::of_file(path)?);
        Ok(())
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).unwrap_or(Value::Null);
        self.parameters.insert(key.to_string(), value);
    }
}

/// Outcome of a suitability search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuitableReport {
    pub status: String,
    pub sigma: f64,
    pub iterations: usize,
    pub scale: f64,
    /// Vector file holding `w`, present when the search succeeded.
    pub weights: Option<PathBuf>,
    pub quantized_weights: Option<PathBuf>,
    /// `[lower, upper]` Collatz bounds after each iteration.
    pub collatz_history: Vec<[f64; 2]>,
    pub manifest: PathBuf,
}

/// Suitability searches along `sigma_i = base / (1 - 2^-i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuitableSweepReport {
    /// Collatz upper bound on the spectral radius used as `base`.
    pub base: f64,
    pub entries: Vec<SuitableReport>,
}

impl SuitableReport {
    pub fn new(res: &SuitableResult, manifest: PathBuf) -> Self {
        SuitableReport {
            status: res.status.as_str().to_string(),
            sigma: res.sigma,
            iterations: res.iterations,
            scale: res.scale,
            weights: None,
            quantized_weights: None,
            collatz_history: res.collatz_history.iter().map(|c| [c.lower, c.upper]).collect(),
            manifest,
        }
    }
}

/// A solve certificate together with ranking-specific extras.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub r: f64,
    pub omega: f64,
    pub omega_max: f64,
    pub s: f64,
    pub sigma: f64,
    pub iterations: usize,
    pub wnorm_bound: f64,
    pub supnorm_bound: f64,
    pub last_step_supnorm: f64,
    pub rounding_wnorm: f64,
    pub schedule: String,
    pub quantized: bool,
    /// Vector file with the certified iterate.
    pub solution: PathBuf,
    pub manifest: PathBuf,
    /// Vector file with normalized PageRank scores.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scores: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// `||p||_1` for PageRank; the bound above is for the unnormalized `p`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pseudorank_l1: Option<f64>,
    /// `alpha / (1 - alpha) ||x(t+1) - x(t)||_1` for PageRank runs with `omega = 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l1_bound: Option<f64>,
}

impl CertificateReport {
    pub fn new(cert: &SolveCertificate, solution: PathBuf, manifest: PathBuf) -> Self {
        CertificateReport {
            r: cert.r,
            omega: cert.omega,
            omega_max: cert.omega_max,
            s: cert.s,
            sigma: cert.sigma,
            iterations: cert.iterations,
            wnorm_bound: cert.wnorm_bound,
            supnorm_bound: cert.supnorm_bound,
            last_step_supnorm: cert.last_step_supnorm,
            rounding_wnorm: cert.rounding_wnorm,
            schedule: cert.schedule.to_string(),
            quantized: cert.quantized,
            solution,
            manifest,
            scores: None,
            alpha: None,
            pseudorank_l1: None,
            l1_bound: None,
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::format(path, e.to_string()))?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let bytes = read_file(path)?;
    serde_json::from_slice(&bytes).map_err(|e| Error::format(path, e.to_string()))
}
