//! Numerical diagnostics for the characterization conditions: increasing
//! comparison functions, decreasing weighted products, existence and
//! uniqueness of weighted estimators, and the zero property.
//!
//! Every failing verdict carries a witness that reproduces the violation
//! by direct re-evaluation.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::model::PsiModel;
use crate::representation::{default_exclusion_radius, MonotoneWeight};
use crate::sample::WeightedSample;
use crate::scalar::Scalar;
use crate::solve::{comparison_function, estimate, theta1, weighted_psi_sum, SolveOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessPoint {
    pub t: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub points: Vec<WitnessPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Witness {
    fn points<T: Scalar>(pts: &[(T, T)]) -> Self {
        Witness {
            points: pts.iter().map(|(t, v)| WitnessPoint { t: t.as_f64(), value: v.as_f64() }).collect(),
            message: None,
        }
    }

    fn message(msg: impl Into<String>) -> Self {
        Witness { points: Vec::new(), message: Some(msg.into()) }
    }

    fn with_message(mut self, msg: impl Into<String>) -> Self {
        self.message = Some(msg.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub tolerance_used: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn new(name: &str, verdict: Verdict, witness: Option<Witness>, tolerance_used: f64) -> Self {
        Check { name: name.to_string(), verdict, witness, tolerance_used, note: None }
    }

    fn error(name: &str, err: &Error, tolerance_used: f64) -> Self {
        let w = Witness { points: Vec::new(), message: Some(format!("{}: {err}", err.code())) };
        let w = match err.location() {
            Some(t) => Witness { points: vec![WitnessPoint { t, value: f64::NAN }], ..w },
            None => w,
        };
        Check::new(name, Verdict::Fail, Some(w), tolerance_used)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn is_fail(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DiagnosticReport {
    pub checks: Vec<Check>,
}

impl DiagnosticReport {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: DiagnosticReport) {
        self.checks.extend(other.checks);
    }

    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(Check::is_fail)
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.checks.iter().filter(|c| c.verdict == verdict).count()
    }
}

/// Relative margin an increase must exceed to count as strict.
pub const STRICTNESS_TOLERANCE: f64 = 1e-12;
/// Relative slack, against the largest `|p·ψ|` on the grid, allowed before
/// an increase of the weighted product counts as a violation.
pub const PRODUCT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_GRID_SIZE: usize = 1024;

/// Checks that `t ↦ −ψ(x, t)/ψ(y, t)` is (strictly) increasing on a uniform
/// grid of `grid_size` points strictly inside `(ϑ₁(x), ϑ₁(y))`.
pub fn check_comparison_monotone<T: Scalar, M: PsiModel<T> + ?Sized>(
    model: &M,
    x: &M::Obs,
    y: &M::Obs,
    grid_size: usize,
    strict: bool,
    opts: &SolveOptions<T>,
) -> Check {
    const NAME: &str = "comparison_monotone";
    let cf = match comparison_function(model, x, y, opts) {
        Ok(cf) => cf,
        Err(e @ Error::DomainEmpty { .. }) => {
            return Check::new(NAME, Verdict::Vacuous, Some(Witness::message(e.to_string())), STRICTNESS_TOLERANCE)
        }
        Err(e) => return Check::error(NAME, &e, STRICTNESS_TOLERANCE),
    };
    let (lo, hi) = cf.domain();
    let n = grid_size.max(2);
    let step = (hi - lo) / T::lit((n + 1) as f64);
    let ts: Vec<T> = (1..=n).map(|i| lo + step * T::lit(i as f64)).filter(|t| *t > lo && *t < hi).collect();
    let values: Vec<Result<T, Error>> = ts.par_iter().map(|&t| cf.eval(t)).collect();
    let mut vals = Vec::with_capacity(values.len());
    for v in values {
        match v {
            Ok(v) => vals.push(v),
            Err(e) => return Check::error(NAME, &e, STRICTNESS_TOLERANCE),
        }
    }
    let tol = T::lit(STRICTNESS_TOLERANCE);
    let mut weak = 0usize;
    for i in 0..vals.len().saturating_sub(1) {
        let margin = tol * (T::one() + vals[i].abs());
        let delta = vals[i + 1] - vals[i];
        if delta < -margin {
            let w = Witness::points(&[(ts[i], vals[i]), (ts[i + 1], vals[i + 1])])
                .with_message("comparison function decreases");
            return Check::new(NAME, Verdict::Fail, Some(w), STRICTNESS_TOLERANCE);
        }
        if strict && delta <= margin {
            weak += 1;
        }
    }
    let mut c = Check::new(NAME, Verdict::Pass, None, STRICTNESS_TOLERANCE);
    if weak > 0 {
        c.note = Some(format!("strictness not resolved on {weak} consecutive pairs; checked as nondecreasing"));
    }
    c
}

/// Checks that `t ↦ p(t) ψ(z, t)` is nonincreasing on `grid`, positive left
/// of `ϑ₁(z)` and negative right of it. Comparisons touching the exclusion
/// zone around `ϑ₁(z)`, or straddling it, are skipped.
pub fn check_decreasing_product<T: Scalar, M: PsiModel<T> + ?Sized>(
    model: &M,
    weight: &MonotoneWeight<T>,
    z: &M::Obs,
    grid: &[T],
    opts: &SolveOptions<T>,
) -> Check {
    const NAME: &str = "decreasing_product";
    let th = match theta1(model, z, opts) {
        Ok(r) => r.theta,
        Err(e) => return Check::error(NAME, &e, PRODUCT_TOLERANCE),
    };
    let radius = default_exclusion_radius(th);
    let values: Vec<Result<T, Error>> = grid.par_iter().map(|&t| Ok(weight.p(t)? * model.psi(z, t))).collect();
    let mut vals = Vec::with_capacity(values.len());
    for v in values {
        match v {
            Ok(v) => vals.push(v),
            Err(e) => return Check::error(NAME, &e, PRODUCT_TOLERANCE),
        }
    }
    let near = |t: T| (t - th).abs() < radius;
    for (&t, &v) in grid.iter().zip(&vals) {
        if near(t) {
            continue;
        }
        let bad = if t < th { !(v > T::zero()) } else { !(v < T::zero()) };
        if bad {
            let w = Witness::points(&[(t, v)]).with_message(format!(
                "product has the wrong sign relative to theta1 = {}",
                th.as_f64()
            ));
            return Check::new(NAME, Verdict::Fail, Some(w), PRODUCT_TOLERANCE);
        }
    }
    let scale = vals.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let tol = T::lit(PRODUCT_TOLERANCE) * scale;
    for i in 0..grid.len().saturating_sub(1) {
        let (a, b) = (grid[i], grid[i + 1]);
        if near(a) || near(b) || (a <= th && th <= b) {
            continue;
        }
        if vals[i + 1] > vals[i] + tol {
            let w = Witness::points(&[(a, vals[i]), (b, vals[i + 1])]).with_message("weighted product increases");
            return Check::new(NAME, Verdict::Fail, Some(w), PRODUCT_TOLERANCE);
        }
    }
    Check::new(NAME, Verdict::Pass, None, PRODUCT_TOLERANCE)
}

/// First probe `ϑ ± kδ` where the weighted sum has the wrong sign, probing
/// `probes` points on each side over the span of the sample's `ϑ₁` values
/// (widened by 5%).
pub fn sign_profile_violation<T: Scalar, M: PsiModel<T> + ?Sized>(
    model: &M,
    sample: &WeightedSample<M::Obs, T>,
    theta_hat: T,
    bracket_width: T,
    probes: usize,
    opts: &SolveOptions<T>,
) -> Result<Option<(T, T)>, Error> {
    let mut lo = theta_hat;
    let mut hi = theta_hat;
    for (x, w) in sample.iter() {
        if w > T::zero() {
            let r = theta1(model, x, opts)?;
            lo = lo.min(r.bracket_lo);
            hi = hi.max(r.bracket_hi);
        }
    }
    let reach = (theta_hat - lo).max(hi - theta_hat) * T::lit(1.05);
    let k_max = probes.max(1);
    let delta = if reach > T::zero() {
        reach / T::lit(k_max as f64)
    } else {
        T::lit(1e-3) * (T::one() + theta_hat.abs()) / T::lit(k_max as f64)
    };
    let theta = model.theta();
    let mut ts = Vec::with_capacity(2 * k_max);
    for k in 1..=k_max {
        let d = delta * T::lit(k as f64);
        if d <= bracket_width {
            continue;
        }
        for t in [theta_hat - d, theta_hat + d] {
            if theta.contains(t) {
                ts.push(t);
            }
        }
    }
    let vals: Vec<T> = ts.par_iter().map(|&t| weighted_psi_sum(model, sample, t)).collect();
    Ok(ts
        .into_iter()
        .zip(vals)
        .find(|&(t, v)| if t < theta_hat { !(v > T::zero()) } else { !(v < T::zero()) }))
}

/// Runs the estimator and the sign-profile test on every sample.
pub fn check_weighted_estimator_family<T: Scalar, M: PsiModel<T> + ?Sized>(
    model: &M,
    samples: &[WeightedSample<M::Obs, T>],
    probes: usize,
    opts: &SolveOptions<T>,
) -> DiagnosticReport
where
    M::Obs: Sync,
{
    let checks = samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let name = format!("weighted_estimator[{i}]");
            let r = match estimate(model, s, opts) {
                Ok(r) => r,
                Err(e) => return Check::error(&name, &e, 0.0),
            };
            match sign_profile_violation(model, s, r.theta, r.width(), probes, opts) {
                Err(e) => Check::error(&name, &e, 0.0),
                Ok(Some((t, v))) => {
                    let w = Witness::points(&[(r.theta, r.residual), (t, v)]).with_message(
                        "weighted sum has the wrong sign at the second point relative to the estimate (first point)",
                    );
                    Check::new(&name, Verdict::Fail, Some(w), 0.0)
                }
                Ok(None) => Check::new(&name, Verdict::Pass, None, 0.0),
            }
        })
        .collect();
    DiagnosticReport { checks }
}

/// Checks `Σ λᵢ ψ(xᵢ, ϑ) = 0` at the estimate.
pub fn check_z_property<T: Scalar, M: PsiModel<T> + ?Sized>(
    model: &M,
    sample: &WeightedSample<M::Obs, T>,
    opts: &SolveOptions<T>,
) -> Check {
    const NAME: &str = "z_property";
    let tol_rel = opts.residual_tolerance.as_f64();
    let r = match estimate(model, sample, opts) {
        Ok(r) => r,
        Err(e) => return Check::error(NAME, &e, tol_rel),
    };
    let tol = opts.residual_tolerance * r.scale;
    let witness = Witness::points(&[(r.theta, r.residual)]);
    if r.residual.abs() <= tol {
        Check::new(NAME, Verdict::Pass, None, tol_rel)
    } else if model.is_continuous() {
        Check::new(NAME, Verdict::Fail, Some(witness.with_message("nonzero residual for a continuous model")), tol_rel)
    } else {
        Check::new(NAME, Verdict::Vacuous, Some(witness.with_message(format!("{:?}", r.crossing))), tol_rel)
    }
}

/// Numeric `ϑ₁(x)` against the closed form, and the residual for
/// continuous models.
pub fn check_theta1<T: Scalar, M: PsiModel<T> + ?Sized>(model: &M, x: &M::Obs, opts: &SolveOptions<T>) -> Check {
    const NAME: &str = "theta1";
    let tol_rel = opts.tolerance.as_f64();
    let r = match theta1(model, x, opts) {
        Ok(r) => r,
        Err(e) => return Check::error(NAME, &e, tol_rel),
    };
    if let Some(exact) = model.theta1_closed_form(x) {
        if (r.theta - exact).abs() > opts.width_at(exact) {
            let w = Witness::points(&[(r.theta, r.residual), (exact, model.psi(x, exact))])
                .with_message("located theta1 (first) differs from the closed form (second)");
            return Check::new(NAME, Verdict::Fail, Some(w), tol_rel);
        }
    }
    if model.is_continuous() && r.residual.abs() > opts.residual_tolerance * r.scale {
        let w = Witness::points(&[(r.theta, r.residual)]).with_message("nonzero residual for a continuous model");
        return Check::new(NAME, Verdict::Fail, Some(w), tol_rel);
    }
    Check::new(NAME, Verdict::Pass, None, tol_rel)
}

/// Which observation pairs to run the comparison check on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairSelection {
    /// All pairs of distinct `ϑ₁` values when there are at most
    /// [`AUTO_ALL_PAIRS_LIMIT`] of them, otherwise neighbours in `ϑ₁` order
    /// plus the extreme pair.
    Auto,
    /// Explicit index pairs into the sample.
    List(Vec<(usize, usize)>),
}

pub const AUTO_ALL_PAIRS_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnoseOptions<T> {
    pub grid_size: usize,
    pub strict: bool,
    pub solve: SolveOptions<T>,
}

impl<T: Scalar> Default for DiagnoseOptions<T> {
    fn default() -> Self {
        DiagnoseOptions { grid_size: DEFAULT_GRID_SIZE, strict: true, solve: SolveOptions::default() }
    }
}

/// Every applicable check for one data set: `ϑ₁` per observation,
/// comparison monotonicity on the selected pairs, weighted estimators on
/// the full sample and on two-point samples (including weights chosen from
/// any comparison witness), and the zero property.
pub fn diagnose<T: Scalar, M: PsiModel<T> + ?Sized>(
    model: &M,
    sample: &WeightedSample<M::Obs, T>,
    pairs: &PairSelection,
    opts: &DiagnoseOptions<T>,
) -> DiagnosticReport
where
    M::Obs: Clone + Send,
{
    let obs = sample.observations();
    let mut report = DiagnosticReport::default();
    let t1: Vec<Result<T, Error>> = obs.par_iter().map(|x| theta1(model, x, &opts.solve).map(|r| r.theta)).collect();
    let t1_checks: Vec<Check> = obs
        .par_iter()
        .enumerate()
        .map(|(i, x)| check_theta1(model, x, &opts.solve).named(format!("theta1[{i}]")))
        .collect();
    report.checks.extend(t1_checks);

    let selected: Vec<(usize, usize)> = match pairs {
        PairSelection::List(list) => list
            .iter()
            .filter(|(i, j)| *i < obs.len() && *j < obs.len() && i != j)
            .map(|&(i, j)| match (&t1[i], &t1[j]) {
                (Ok(a), Ok(b)) if b < a => (j, i),
                _ => (i, j),
            })
            .collect(),
        PairSelection::Auto => auto_pairs(&t1),
    };
    if selected.is_empty() {
        report.push(Check::new(
            "comparison_monotone",
            Verdict::Vacuous,
            Some(Witness::message("fewer than two observations with distinct theta1")),
            STRICTNESS_TOLERANCE,
        ));
    }
    let cmp: Vec<Check> = selected
        .par_iter()
        .map(|&(i, j)| {
            check_comparison_monotone(model, &obs[i], &obs[j], opts.grid_size, opts.strict, &opts.solve)
                .named(format!("comparison_monotone[{i},{j}]"))
        })
        .collect();

    let mut samples = vec![sample.clone()];
    let mut labels = vec!["sample".to_string()];
    for (&(i, j), check) in selected.iter().zip(&cmp) {
        let mut ratios = vec![T::one(), T::lit(3.0), T::lit(1.0 / 3.0)];
        if let (Verdict::Fail, Some(w)) = (check.verdict, &check.witness) {
            if w.points.len() == 2 {
                ratios.push(T::lit(0.5 * (w.points[0].value + w.points[1].value)));
            }
        }
        for c in ratios {
            if c > T::zero() && c.is_finite() {
                if let Ok(s) = WeightedSample::new(vec![obs[i].clone(), obs[j].clone()], vec![T::one(), c]) {
                    samples.push(s);
                    labels.push(format!("pair[{i},{j}] weights (1, {c})"));
                }
            }
        }
    }
    report.checks.extend(cmp);

    let fam = check_weighted_estimator_family(model, &samples, opts.grid_size, &opts.solve);
    report.checks.extend(fam.checks.into_iter().zip(labels).map(|(mut c, label)| {
        c.note = Some(label);
        c
    }));
    report.push(check_z_property(model, sample, &opts.solve));
    report
}

fn auto_pairs<T: Scalar>(t1: &[Result<T, Error>]) -> Vec<(usize, usize)> {
    let mut idx: Vec<(usize, T)> = t1.iter().enumerate().filter_map(|(i, r)| r.as_ref().ok().map(|t| (i, *t))).collect();
    idx.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal).then(a.0.cmp(&b.0)));
    idx.dedup_by(|b, a| a.1 == b.1);
    let n = idx.len();
    if n < 2 {
        return Vec::new();
    }
    if n <= AUTO_ALL_PAIRS_LIMIT {
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                out.push((idx[a].0, idx[b].0));
            }
        }
        out
    } else {
        let mut out: Vec<(usize, usize)> = idx.windows(2).map(|w| (w[0].0, w[1].0)).collect();
        out.push((idx[0].0, idx[n - 1].0));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::models::{normal_variance_reference, LocationModel, NormalVarianceModel, OscillatingModel, SignModel};
    use crate::quadrature::QuadratureOptions;
    use crate::representation::{build_monotone_weight, unit_weight};

    fn o() -> SolveOptions<f64> {
        SolveOptions::default()
    }

    #[test]
    fn normal_variance_comparison_is_strictly_increasing() {
        let m = NormalVarianceModel::<f64>::new(1.0, 1.0).unwrap();
        let c = check_comparison_monotone(&m, &1.5, &4.0, 1024, true, &o());
        assert_eq!(c.verdict, Verdict::Pass, "{c:?}");
        assert!(c.note.is_none());
    }

    #[test]
    fn decreasing_psi_gives_increasing_comparison() {
        let m = LocationModel::<f64>::huber(1.0).unwrap();
        let c = check_comparison_monotone(&m, &-1.0, &0.5, 256, false, &o());
        assert_eq!(c.verdict, Verdict::Pass);
    }

    #[test]
    fn oscillating_comparison_fails_with_reproducible_witness() {
        let m = OscillatingModel::<f64>::new(2.0, 20.0).unwrap();
        let c = check_comparison_monotone(&m, &0.0, &1.0, 1024, true, &o());
        assert_eq!(c.verdict, Verdict::Fail);
        let w = c.witness.unwrap();
        let (p, q) = (&w.points[0], &w.points[1]);
        let r = |t: f64| -m.psi(&0.0, t) / m.psi(&1.0, t);
        assert!(p.t < q.t);
        assert_eq!(r(p.t), p.value);
        assert_eq!(r(q.t), q.value);
        assert!(q.value < p.value - 1e-12 * (1.0 + p.value.abs()));
    }

    #[test]
    fn equal_theta1_is_vacuous() {
        let m = NormalVarianceModel::<f64>::new(0.0, 1.0).unwrap();
        let c = check_comparison_monotone(&m, &2.0, &-2.0, 16, true, &o());
        assert_eq!(c.verdict, Verdict::Vacuous);
    }

    #[test]
    fn exact_weight_product_passes_unit_weight_fails() {
        let m = NormalVarianceModel::<f64>::new(0.0, 1.0).unwrap();
        let r = normal_variance_reference::<f64>(0.0, 1.0).unwrap();
        let g = Grid::<f64>::uniform(0.1, 10.0, 400).unwrap();
        let w = build_monotone_weight(&g, |s| Ok(r.q_star(s)), 1.0, &QuadratureOptions::default()).unwrap();
        for z in [0.5, 1.0, 2.0, 3.0] {
            let c = check_decreasing_product(&m, &w, &z, g.points(), &o());
            assert_eq!(c.verdict, Verdict::Pass, "{z}: {c:?}");
        }
        let unit = unit_weight(&g);
        let c = check_decreasing_product(&m, &unit, &1.0, g.points(), &o());
        assert_eq!(c.verdict, Verdict::Fail);
        let pts = &c.witness.unwrap().points;
        // psi(1, .) increases beyond 2 (x - m)^2 = 2
        assert!(pts[0].t > 2.0);
        assert!(m.psi(&1.0, pts[1].t) > m.psi(&1.0, pts[0].t));
    }

    #[test]
    fn unit_weight_mean_model_passes() {
        let m = LocationModel::<f64>::mean();
        let g = Grid::<f64>::uniform(-3.0, 3.0, 100).unwrap();
        let c = check_decreasing_product(&m, &unit_weight(&g), &0.7, g.points(), &o());
        assert_eq!(c.verdict, Verdict::Pass);
    }

    #[test]
    fn z_property_verdicts() {
        let nv = NormalVarianceModel::<f64>::new(0.0, 1.0).unwrap();
        let s = WeightedSample::new(vec![1.0, -2.0, 0.3], vec![1.0, 2.0, 0.5]).unwrap();
        assert_eq!(check_z_property(&nv, &s, &o()).verdict, Verdict::Pass);
        let mean = LocationModel::<f64>::mean();
        assert_eq!(check_z_property(&mean, &s, &o()).verdict, Verdict::Pass);
        let c = check_z_property(&SignModel, &s, &o());
        assert_eq!(c.verdict, Verdict::Vacuous);
        assert!(c.witness.unwrap().message.unwrap().contains("JumpCrossing"));
    }

    #[test]
    fn single_observation_samples_pass() {
        let m = NormalVarianceModel::<f64>::new(0.0, 1.0).unwrap();
        let samples: Vec<_> = [0.5, 1.0, 3.0].iter().map(|&x| WeightedSample::uniform(vec![x]).unwrap()).collect();
        let rep = check_weighted_estimator_family(&m, &samples, 256, &o());
        assert_eq!(rep.count(Verdict::Pass), 3);
    }

    #[test]
    fn oscillating_family_fails() {
        let m = OscillatingModel::<f64>::new(2.0, 20.0).unwrap();
        let s = WeightedSample::uniform(vec![0.0, 1.0]).unwrap();
        let rep = diagnose(&m, &s, &PairSelection::Auto, &DiagnoseOptions::default());
        assert!(rep.has_failures());
        assert!(rep.checks.iter().any(|c| c.name.starts_with("weighted_estimator") && c.is_fail()));
    }

    #[test]
    fn normal_variance_diagnose_all_pass() {
        let m = NormalVarianceModel::<f64>::new(2.0, 1.0).unwrap();
        let s = WeightedSample::uniform(vec![1.0, 3.5, -1.0, 2.2]).unwrap();
        let rep = diagnose(&m, &s, &PairSelection::Auto, &DiagnoseOptions::default());
        assert!(!rep.has_failures(), "{rep:#?}");
    }

    #[test]
    fn single_observation_diagnose() {
        let m = NormalVarianceModel::<f64>::new(0.0, 1.0).unwrap();
        let s = WeightedSample::uniform(vec![2.0]).unwrap();
        let rep = diagnose(&m, &s, &PairSelection::Auto, &DiagnoseOptions::default());
        assert!(!rep.has_failures());
        assert_eq!(rep.count(Verdict::Vacuous), 1);
    }
}
