//! CSV ingestion: a header row, observation column `x`, optional weights.

use std::fs::File;
use std::path::Path;

use psi_core::WeightedSample;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub const X_COLUMN: &str = "x";
pub const DEFAULT_WEIGHT_COLUMN: &str = "w";

/// Observations and, when a weight column is present or requested, weights.
pub fn read_columns(path: &Path, weights_col: Option<&str>) -> CliResult<(Vec<f64>, Option<Vec<f64>>)> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = rdr
        .headers()
        .map_err(|e| CliError::config("DATA_PARSE", format!("{}: {e}", path.display())))?
        .clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let xi = find(X_COLUMN).ok_or_else(|| {
        CliError::config("DATA_MISSING_COLUMN", format!("{}: no column '{X_COLUMN}'", path.display()))
    })?;
    let wi = match weights_col {
        Some(name) => Some(find(name).ok_or_else(|| {
            CliError::config("DATA_MISSING_COLUMN", format!("{}: no column '{name}'", path.display()))
        })?),
        None => find(DEFAULT_WEIGHT_COLUMN),
    };
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let line = row + 2;
        let rec = rec.map_err(|e| CliError::config("DATA_PARSE", format!("{}:{line}: {e}", path.display())))?;
        let cell = |i: usize, what: &str| -> CliResult<f64> {
            let raw = rec.get(i).unwrap_or("");
            raw.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                CliError::config("DATA_PARSE", format!("{}:{line}: {what} '{raw}' is not a finite number", path.display()))
            })
        };
        xs.push(cell(xi, "observation")?);
        if let Some(wi) = wi {
            ws.push(cell(wi, "weight")?);
        }
    }
    Ok((xs, wi.map(|_| ws)))
}

/// Data file rows followed by inline observations; explicit weights
/// override the file's weight column.
pub fn load_sample(cfg: &RunConfig) -> CliResult<WeightedSample<f64, f64>> {
    let (mut xs, file_ws) = match &cfg.data {
        Some(path) => read_columns(path, cfg.weights_col.as_deref())?,
        None => (Vec::new(), None),
    };
    let n_file = xs.len();
    xs.extend_from_slice(&cfg.inline);
    if xs.is_empty() {
        return Err(CliError::config("CONFIG_NO_DATA", "no observations (give --data and/or --inline)"));
    }
    let ws = match &cfg.weights {
        Some(ws) if ws.len() != xs.len() => {
            return Err(CliError::config(
                "CONFIG_INVALID",
                format!("{} weights given for {} observations", ws.len(), xs.len()),
            ))
        }
        Some(ws) => ws.clone(),
        None => {
            let mut ws = file_ws.unwrap_or_else(|| vec![1.0; n_file]);
            ws.resize(xs.len(), 1.0);
            ws
        }
    };
    Ok(WeightedSample::new(xs, ws)?)
}
