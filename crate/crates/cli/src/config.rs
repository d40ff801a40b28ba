//! Command-line flags, the optional TOML run file, and their merge into a
//! single [`RunConfig`]. Flags win over the file; relative paths in the file
//! are resolved against the file's directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use psi_core::diagnostics::{PairSelection, DEFAULT_GRID_SIZE};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "psi", version, about = "Weighted generalized psi-estimators, monotone representations and diagnostics")]
pub struct Cli {
    /// Worker threads for parallel evaluation (default: one per core).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Locate the weighted sign-change estimator of a data set.
    Estimate(EstimateArgs),
    /// Build envelopes, the monotone weight and convexified losses.
    Representation(RepresentationArgs),
    /// Run the monotonicity and estimator diagnostics.
    Diagnose(DiagnoseArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// TOML run file; flags override its values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<String>,
    /// Model parameter, repeatable.
    #[arg(long = "param", value_name = "K=V")]
    pub params: Vec<String>,
    /// Bracket width tolerance, relative to 1 + |theta|.
    #[arg(long)]
    pub tol: Option<f64>,
    /// CSV with header; column `x`, optional weight column.
    #[arg(long, value_name = "CSV")]
    pub data: Option<PathBuf>,
    /// Weight column in the data file (default `w` when present).
    #[arg(long)]
    pub weights_col: Option<String>,
    /// Comma-separated weights for all observations, in order.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub weights: Option<Vec<f64>>,
    /// Comma-separated observations appended after the data file rows.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub inline: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Output JSON file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RepresentationArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Family as a CSV file with column `x`, or comma-separated values.
    #[arg(long, allow_hyphen_values = true)]
    pub family: Option<String>,
    /// Tabulation grid `lo,hi,points`.
    #[arg(long, value_name = "LO,HI,N", allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Anchor where p = 1 (default: grid midpoint).
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// `auto`, or index pairs like `0:1,2:5`.
    #[arg(long)]
    pub pairs: Option<String>,
    /// Points per comparison grid and probes per side in sign profiles.
    #[arg(long)]
    pub grid_size: Option<usize>,
    /// Output JSON file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySource {
    Inline(Vec<f64>),
    File(PathBuf),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FileFamily {
    Inline(Vec<f64>),
    File(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    model: Option<String>,
    params: Option<BTreeMap<String, toml::Value>>,
    tol: Option<f64>,
    data: Option<String>,
    weights_col: Option<String>,
    weights: Option<Vec<f64>>,
    inline: Option<Vec<f64>>,
    out: Option<String>,
    family: Option<FileFamily>,
    grid: Option<GridSpec>,
    tau: Option<f64>,
    out_dir: Option<String>,
    pairs: Option<String>,
    grid_size: Option<usize>,
}

/// Everything a subcommand needs, after merging file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: String,
    pub params: BTreeMap<String, String>,
    pub tol: Option<f64>,
    pub data: Option<PathBuf>,
    pub weights_col: Option<String>,
    pub weights: Option<Vec<f64>>,
    pub inline: Vec<f64>,
    pub out: Option<PathBuf>,
    pub family: Option<FamilySource>,
    pub grid: Option<GridSpec>,
    pub tau: Option<f64>,
    pub out_dir: Option<PathBuf>,
    pub pairs: PairSelection,
    pub grid_size: usize,
}

fn load_file(path: &Path) -> CliResult<FileConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::config("CONFIG_PARSE", format!("{}: {e}", path.display())))
}

fn param_string(key: &str, v: &toml::Value) -> CliResult<String> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(format!("{f:?}")),
        toml::Value::Boolean(b) => Ok(b.to_string()),
        _ => Err(CliError::config("CONFIG_INVALID", format!("parameter '{key}' must be a scalar"))),
    }
}

fn parse_param(kv: &str) -> CliResult<(String, String)> {
    match kv.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(CliError::config("CONFIG_INVALID", format!("--param expects k=v, got '{kv}'"))),
    }
}

pub fn parse_grid(s: &str) -> CliResult<GridSpec> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || CliError::config("CONFIG_INVALID", format!("--grid expects lo,hi,points, got '{s}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok(GridSpec {
        lo: parts[0].parse().map_err(|_| bad())?,
        hi: parts[1].parse().map_err(|_| bad())?,
        points: parts[2].parse().map_err(|_| bad())?,
    })
}

pub fn parse_pairs(s: &str) -> CliResult<PairSelection> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("auto") {
        return Ok(PairSelection::Auto);
    }
    let bad = || CliError::config("CONFIG_INVALID", format!("--pairs expects auto or i:j,..., got '{s}'"));
    let mut out = Vec::new();
    for item in s.split(',') {
        let (i, j) = item.split_once(':').ok_or_else(bad)?;
        out.push((i.trim().parse().map_err(|_| bad())?, j.trim().parse().map_err(|_| bad())?));
    }
    Ok(PairSelection::List(out))
}

fn parse_family(s: &str) -> FamilySource {
    let values: Option<Vec<f64>> = s.split(',').map(|v| v.trim().parse::<f64>().ok()).collect();
    match values {
        Some(v) if !v.is_empty() => FamilySource::Inline(v),
        _ => FamilySource::File(PathBuf::from(s)),
    }
}

impl RunConfig {
    fn from_common(common: &CommonArgs) -> CliResult<(Self, FileConfig)> {
        let (mut file, base) = match &common.config {
            Some(path) => (load_file(path)?, path.parent().map(Path::to_path_buf).unwrap_or_default()),
            None => (FileConfig::default(), PathBuf::new()),
        };
        let rel = |p: String| base.join(p);
        let mut params = BTreeMap::new();
        for (k, v) in file.params.take().unwrap_or_default() {
            let s = param_string(&k, &v)?;
            params.insert(k, s);
        }
        for kv in &common.params {
            let (k, v) = parse_param(kv)?;
            params.insert(k, v);
        }
        let model = common
            .model
            .clone()
            .or(file.model.take())
            .ok_or_else(|| CliError::config("CONFIG_MISSING_MODEL", "no model given (--model or `model` in the config)"))?;
        let tol = common.tol.or(file.tol);
        if let Some(t) = tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::config("CONFIG_INVALID", format!("tolerance must be positive, got {t}")));
            }
        }
        let family = match file.family.take() {
            Some(FileFamily::Inline(v)) => Some(FamilySource::Inline(v)),
            Some(FileFamily::File(p)) => Some(match parse_family(&p) {
                FamilySource::File(p) => FamilySource::File(base.join(p)),
                inline => inline,
            }),
            None => None,
        };
        let cfg = RunConfig {
            model,
            params,
            tol,
            data: common.data.clone().or(file.data.take().map(rel)),
            weights_col: common.weights_col.clone().or(file.weights_col.take()),
            weights: common.weights.clone().or(file.weights.take()),
            inline: common.inline.clone().or(file.inline.take()).unwrap_or_default(),
            out: file.out.take().map(|p| base.join(p)),
            family,
            grid: file.grid,
            tau: file.tau,
            out_dir: file.out_dir.take().map(|p| base.join(p)),
            pairs: PairSelection::Auto,
            grid_size: file.grid_size.unwrap_or(DEFAULT_GRID_SIZE),
        };
        Ok((cfg, file))
    }

    pub fn for_estimate(args: &EstimateArgs) -> CliResult<Self> {
        let (mut cfg, _) = Self::from_common(&args.common)?;
        if args.out.is_some() {
            cfg.out = args.out.clone();
        }
        Ok(cfg)
    }

    pub fn for_representation(args: &RepresentationArgs) -> CliResult<Self> {
        let (mut cfg, _) = Self::from_common(&args.common)?;
        if let Some(f) = &args.family {
            cfg.family = Some(parse_family(f));
        }
        if let Some(g) = &args.grid {
            cfg.grid = Some(parse_grid(g)?);
        }
        cfg.tau = args.tau.or(cfg.tau);
        if args.out_dir.is_some() {
            cfg.out_dir = args.out_dir.clone();
        }
        Ok(cfg)
    }

    pub fn for_diagnose(args: &DiagnoseArgs) -> CliResult<Self> {
        let (mut cfg, file) = Self::from_common(&args.common)?;
        if let Some(p) = args.pairs.as_deref().or(file.pairs.as_deref()) {
            cfg.pairs = parse_pairs(p)?;
        }
        if let Some(n) = args.grid_size {
            cfg.grid_size = n;
        }
        if cfg.grid_size < 2 {
            return Err(CliError::config("CONFIG_INVALID", "grid size must be at least 2"));
        }
        if args.out.is_some() {
            cfg.out = args.out.clone();
        }
        Ok(cfg)
    }
}
