//! Signal and sample file formats.

use std::path::Path;

use derivsamp_core::analysis::SamplingSet;
use derivsamp_core::operators::DerivativeSamples;
use derivsamp_core::signal::BandlimitedSignal;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::output::{read_csv, read_text};

/// Sinc-series signal `f(x) = Σ c_n sinc(σx - nπ)` with its useful window.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SignalData {
    pub sigma: f64,
    pub n_min: i64,
    pub coeffs: Vec<f64>,
    /// Interval outside which the signal is negligible.
    pub window: (f64, f64),
}

impl SignalData {
    pub fn from_signal(s: &BandlimitedSignal, window: (f64, f64)) -> Self {
        Self {
            sigma: s.sigma(),
            n_min: s.n_min(),
            coeffs: s.coeffs().to_vec(),
            window,
        }
    }

    pub fn signal(&self) -> Result<BandlimitedSignal> {
        Ok(BandlimitedSignal::new(
            self.sigma,
            self.n_min,
            self.coeffs.clone(),
        )?)
    }
}

pub fn read_signal(path: &Path) -> Result<SignalData> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

/// Sample table `x, f, f1, ..., f{k-1}` plus the `sigma` recorded by the
/// command that wrote it, if any.
pub struct SampleFile {
    pub samples: DerivativeSamples,
    pub sigma: Option<f64>,
}

pub fn sample_header(k: usize) -> Vec<String> {
    let mut h = vec!["x".to_string(), "f".to_string()];
    h.extend((1..k).map(|j| format!("f{j}")));
    h
}

pub fn read_samples(path: &Path) -> Result<SampleFile> {
    let table = read_csv(path)?;
    let cols = table.header.len();
    if cols < 2 || table.header[0] != "x" {
        return Err(CliError::invalid(format!(
            "{}: expected columns x, f, f1, ..., got {:?}",
            path.display(),
            table.header
        )));
    }
    let k = cols - 1;
    let mut points = Vec::with_capacity(table.rows.len());
    let mut data = Vec::with_capacity(table.rows.len() * k);
    for row in &table.rows {
        points.push(row[0]);
        data.extend_from_slice(&row[1..]);
    }
    let set = SamplingSet::new(points)?;
    let sigma = table
        .meta
        .as_ref()
        .and_then(|m| m.pointer("/config/sigma"))
        .and_then(|v| v.as_f64());
    Ok(SampleFile {
        samples: DerivativeSamples::new(set, k, data)?,
        sigma,
    })
}

/// Sampling points from a CSV file: the first column, header optional.
pub fn read_points(path: &Path) -> Result<SamplingSet> {
    let text = read_text(path)?;
    let mut points = Vec::new();
    let mut first_row = true;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cell = line.split(',').next().unwrap_or("").trim();
        let header = std::mem::replace(&mut first_row, false);
        match cell.parse::<f64>() {
            Ok(x) => points.push(x),
            Err(_) if header => continue,
            Err(e) => {
                return Err(CliError::invalid(format!(
                    "{}: line {}: {e}",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(SamplingSet::new(points)?)
}
