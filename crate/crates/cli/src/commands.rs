use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use psi_core::diagnostics::{check_decreasing_product, diagnose, DiagnoseOptions, Verdict};
use psi_core::models::BuiltinModel;
use psi_core::representation::{
    build_monotone_weight, q_star_envelope, verify_common_minimizer, ArgminReport, ConvexifiedLoss, EnvelopeConfig,
    FamilyEnvelope, MonotoneWeight,
};
use psi_core::{
    estimate, theta1, Crossing, Grid, MinimizeOptions, PsiModel, QuadratureOptions, SolveOptions, WeightedSample,
};

use crate::config::{FamilySource, GridSpec, RunConfig};
use crate::data::{load_sample, read_columns};
use crate::error::{CliError, CliResult, EXIT_DIAGNOSTIC, EXIT_OK};

fn model(cfg: &RunConfig) -> CliResult<BuiltinModel<f64>> {
    Ok(BuiltinModel::from_name(&cfg.model, &cfg.params)?)
}

fn solve_options(cfg: &RunConfig) -> SolveOptions<f64> {
    match cfg.tol {
        Some(t) => SolveOptions::default().with_tolerance(t),
        None => SolveOptions::default(),
    }
}

/// Numbers in CSV tables: shortest round-trip decimal.
fn num(v: f64) -> String {
    format!("{v:?}")
}

fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn emit_json<S: Serialize>(value: &S, out: Option<&Path>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    match out {
        Some(path) => write_bytes(path, text.as_bytes()),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::config("IO_ERROR", format!("stdout: {e}"))),
    }
}

fn write_table(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::config("IO_ERROR", format!("{}: {e}", path.display()));
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.into_iter().map(num)).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::config("IO_ERROR", format!("{}: {e}", path.display())))?;
    write_bytes(path, &bytes)
}

#[derive(Debug, Serialize)]
pub struct EstimateReport {
    pub theta: f64,
    pub bracket: [f64; 2],
    pub residual: f64,
    pub crossing: Crossing,
    pub n: usize,
    pub sum_weights: f64,
}

pub fn cmd_estimate(cfg: &RunConfig) -> CliResult<u8> {
    let model = model(cfg)?;
    let sample = load_sample(cfg)?;
    let r = estimate(&model, &sample, &solve_options(cfg))?;
    let report = EstimateReport {
        theta: r.theta,
        bracket: [r.bracket_lo, r.bracket_hi],
        residual: r.residual,
        crossing: r.crossing,
        n: sample.len(),
        sum_weights: sample.total_weight(),
    };
    emit_json(&report, cfg.out.as_deref())?;
    Ok(EXIT_OK)
}

pub fn cmd_diagnose(cfg: &RunConfig) -> CliResult<u8> {
    let model = model(cfg)?;
    let sample = load_sample(cfg)?;
    let opts = DiagnoseOptions { grid_size: cfg.grid_size, strict: true, solve: solve_options(cfg) };
    let report = diagnose(&model, &sample, &cfg.pairs, &opts);
    emit_json(&report, cfg.out.as_deref())?;
    Ok(if report.has_failures() { EXIT_DIAGNOSTIC } else { EXIT_OK })
}

fn checked_grid(model: &BuiltinModel<f64>, spec: &GridSpec) -> CliResult<Grid<f64>> {
    let theta = model.theta();
    for end in [spec.lo, spec.hi] {
        if !theta.contains(end) {
            return Err(CliError::config(
                "CONFIG_GRID_OUT_OF_THETA",
                format!("grid end {end} outside the parameter interval ({}, {})", theta.lo(), theta.hi()),
            )
            .at(end));
        }
    }
    if spec.lo.partial_cmp(&spec.hi) != Some(std::cmp::Ordering::Less) || spec.points < 2 {
        return Err(CliError::config("CONFIG_INVALID", "grid needs lo < hi and at least 2 points"));
    }
    Ok(Grid::uniform(spec.lo, spec.hi, spec.points)?)
}

fn load_family(src: &FamilySource) -> CliResult<Vec<f64>> {
    let family = match src {
        FamilySource::Inline(v) => v.clone(),
        FamilySource::File(path) => read_columns(path, None)?.0,
    };
    if family.is_empty() {
        return Err(CliError::config("CONFIG_INVALID", "empty family"));
    }
    Ok(family)
}

#[derive(Debug, Serialize)]
struct EnvelopeSummary {
    max_gap: f64,
    mean_gap: f64,
}

#[derive(Debug, Serialize)]
struct WeightSummary {
    monotonicity: &'static str,
    min_p: f64,
    max_p: f64,
}

/// Closed-form weight against the weights built from each envelope.
#[derive(Debug, Serialize)]
struct ReferenceSummary {
    p_within_envelope_bounds: bool,
    max_abs_log_ratio: f64,
}

#[derive(Debug, Serialize)]
struct LossEntry {
    index: usize,
    x: f64,
    weight: f64,
    theta1: Option<f64>,
    file: Option<String>,
    product_check: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<String>,
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    code: String,
    message: String,
    t: Option<f64>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum ArgminSummary {
    Done { observations_used: usize, #[serde(flatten)] report: ArgminReport<f64> },
    Failed { observations_used: usize, error: ErrorBody },
}

#[derive(Debug, Serialize)]
struct RepresentationSummary {
    model: String,
    params: std::collections::BTreeMap<String, String>,
    grid: GridSpec,
    tau: f64,
    family_size: usize,
    loss_source: &'static str,
    envelope: EnvelopeSummary,
    weight: WeightSummary,
    reference: Option<ReferenceSummary>,
    losses: Vec<LossEntry>,
    argmin: ArgminSummary,
}

fn monotonicity(values: &[f64]) -> &'static str {
    let up = values.windows(2).all(|w| w[1] >= w[0]);
    let down = values.windows(2).all(|w| w[1] <= w[0]);
    match (up, down) {
        (true, true) => "constant",
        (true, false) => "nondecreasing",
        (false, true) => "nonincreasing",
        _ => "mixed",
    }
}

fn reference_summary(
    cfg_model: &BuiltinModel<f64>,
    grid: &Grid<f64>,
    weight: &MonotoneWeight<f64>,
    upper: &MonotoneWeight<f64>,
    tau: f64,
) -> CliResult<Option<ReferenceSummary>> {
    let Some(r) = cfg_model.reference() else { return Ok(None) };
    let log_ref_tau = r.p(tau).ln();
    let mut within = true;
    let mut max_ratio = 0.0f64;
    for &t in grid.points() {
        let exact = r.p(t).ln() - log_ref_tau;
        let a = weight.log_p(t)?;
        let b = upper.log_p(t)?;
        let slack = 1e-6 * (1.0 + exact.abs());
        within &= a.min(b) - slack <= exact && exact <= a.max(b) + slack;
        max_ratio = max_ratio.max((a - exact).abs());
    }
    Ok(Some(ReferenceSummary { p_within_envelope_bounds: within, max_abs_log_ratio: max_ratio }))
}

pub fn cmd_representation(cfg: &RunConfig) -> CliResult<u8> {
    let model = model(cfg)?;
    let spec = cfg.grid.ok_or_else(|| CliError::config("CONFIG_INVALID", "representation needs --grid lo,hi,points"))?;
    let grid = checked_grid(&model, &spec)?;
    let family = load_family(
        cfg.family.as_ref().ok_or_else(|| CliError::config("CONFIG_INVALID", "representation needs --family"))?,
    )?;
    let out_dir: PathBuf =
        cfg.out_dir.clone().ok_or_else(|| CliError::config("CONFIG_INVALID", "representation needs --out-dir"))?;
    let tau = cfg.tau.unwrap_or_else(|| grid.midpoint());
    if !grid.contains(tau) {
        return Err(psi_core::Error::TauOutsideGrid { tau, lo: grid.lo(), hi: grid.hi() }.into());
    }
    let solve = solve_options(cfg);
    let quad = QuadratureOptions::default();

    let mut env_cfg = EnvelopeConfig::new(family.clone(), grid.clone());
    env_cfg.solve = solve;
    let table = q_star_envelope(&model, &env_cfg)?;
    let env = FamilyEnvelope::new(&model, &family, None, &solve)?;
    let weight = build_monotone_weight(&grid, |t| env.q_lower(t), tau, &quad)?;
    let upper = build_monotone_weight(&grid, |t| env.q_upper(t), tau, &quad)?;

    let gaps = table.gaps();
    write_table(
        &out_dir.join("envelope.csv"),
        &["t", "q_lower", "q_upper", "gap"],
        grid.points().iter().enumerate().map(|(i, &t)| vec![t, table.q_lower[i], table.q_upper[i], gaps[i]]),
    )?;
    let log_p = grid.points().iter().map(|&t| weight.log_p(t)).collect::<Result<Vec<_>, _>>()?;
    let p: Vec<f64> = log_p.iter().map(|v| v.exp()).collect();
    write_table(
        &out_dir.join("weight.csv"),
        &["t", "log_p", "p"],
        grid.points().iter().enumerate().map(|(i, &t)| vec![t, log_p[i], p[i]]),
    )?;

    let (loss_sample, loss_source) = if cfg.data.is_some() || !cfg.inline.is_empty() {
        (load_sample(cfg)?, "data")
    } else {
        (WeightedSample::uniform(family.clone())?, "family")
    };
    let loss = ConvexifiedLoss { model: &model, weight: &weight, quadrature: quad, solve };
    let mut entries = Vec::new();
    let mut used_x = Vec::new();
    let mut used_w = Vec::new();
    for (index, (x, w)) in loss_sample.iter().enumerate() {
        let mut entry =
            LossEntry { index, x: *x, weight: w, theta1: None, file: None, product_check: None, skipped: None };
        match theta1(&model, x, &solve) {
            Err(e) => entry.skipped = Some(format!("{}: {e}", e.code())),
            Ok(r) if !weight.contains(r.theta) => {
                entry.theta1 = Some(r.theta);
                entry.skipped = Some("theta1 outside the grid span".into());
            }
            Ok(r) => {
                entry.theta1 = Some(r.theta);
                let obs = loss.for_observation(x)?;
                let values = grid.points().iter().map(|&t| obs.eval(t)).collect::<Result<Vec<_>, _>>()?;
                let name = format!("loss_{index:03}.csv");
                write_table(
                    &out_dir.join(&name),
                    &["t", "rho_star"],
                    grid.points().iter().zip(&values).map(|(&t, &v)| vec![t, v]),
                )?;
                entry.file = Some(name);
                entry.product_check =
                    Some(check_decreasing_product(&model, &weight, x, grid.points(), &solve).verdict);
                used_x.push(*x);
                used_w.push(w);
            }
        }
        entries.push(entry);
    }

    let used = used_x.len();
    let argmin = match WeightedSample::new(used_x, used_w).map_err(CliError::from).and_then(|s| {
        verify_common_minimizer(&model, &weight, &s, &solve, &MinimizeOptions::default(), &quad).map_err(Into::into)
    }) {
        Ok(report) => ArgminSummary::Done { observations_used: used, report },
        Err(e) => ArgminSummary::Failed {
            observations_used: used,
            error: ErrorBody { code: e.code, message: e.message, t: e.t },
        },
    };

    let summary = RepresentationSummary {
        model: cfg.model.clone(),
        params: cfg.params.clone(),
        grid: spec,
        tau,
        family_size: family.len(),
        loss_source,
        envelope: EnvelopeSummary {
            max_gap: table.max_gap(),
            mean_gap: gaps.iter().sum::<f64>() / gaps.len() as f64,
        },
        weight: WeightSummary {
            monotonicity: monotonicity(&p),
            min_p: p.iter().cloned().fold(f64::INFINITY, f64::min),
            max_p: p.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        },
        reference: reference_summary(&model, &grid, &weight, &upper, tau)?,
        losses: entries,
        argmin,
    };
    emit_json(&summary, Some(&out_dir.join("summary.json")))?;
    Ok(EXIT_OK)
}
