//! Monotone representation of a ψ-function: envelopes `q_lower`/`q_upper`
//! of the log-derivative ratio over a finite family, the positive weight
//! `p = exp(−∫_τ q_lower)` that makes every `p·ψ(z, ·)` decreasing, and the
//! convexified loss `ρ*` whose minimizer is the ψ-estimator.

mod envelope;
mod loss;
mod weight;

pub use envelope::{
    default_exclusion_radius, log_derivative_ratio, q_star_envelope, EnvelopeConfig, EnvelopeTable,
    FamilyEnvelope, ENVELOPE_ORDER_TOLERANCE,
};
pub use loss::{convexified_loss, ConvexifiedLoss, ObservationLoss, TotalLoss};
pub use weight::{build_monotone_weight, unit_weight, weighted_psi, Interpolation, MonotoneWeight, WeightedPsi};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::interval::ParamInterval;
use crate::minimize::{argmin_objective, MinimizeOptions};
use crate::model::PsiModel;
use crate::quadrature::QuadratureOptions;
use crate::sample::WeightedSample;
use crate::scalar::{pairwise_sum, Scalar};
use crate::solve::{estimate, theta1, SolveOptions};

/// Grid over the `ϑ₁` range of `observations` widened by 50% on each side
/// and kept inside Θ; uniform, or geometric towards a nearby finite lower
/// end of Θ.
pub fn default_working_grid<T: Scalar, M: PsiModel<T> + ?Sized>(
    model: &M,
    observations: &[M::Obs],
    points: usize,
    opts: &SolveOptions<T>,
) -> Result<Grid<T>> {
    if observations.is_empty() {
        return Err(Error::InvalidConfig("no observations to derive a working grid from".into()));
    }
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for x in observations {
        let th = theta1(model, x, opts)?.theta;
        lo = lo.min(th);
        hi = hi.max(th);
    }
    let half = T::lit(0.5);
    let pad = if hi > lo { half * (hi - lo) } else { half * (T::one() + lo.abs()) };
    let theta = model.theta();
    let mut a = lo - pad;
    let mut b = hi + pad;
    if !theta.contains(a) {
        a = theta.lo() + half * (lo - theta.lo());
    }
    if !theta.contains(b) {
        b = theta.hi() - half * (theta.hi() - hi);
    }
    // near a finite end of Θ, space points geometrically in the distance to it
    let edge = theta.lo();
    if edge.is_finite() && (b - edge) > T::lit(GEOMETRIC_SPAN_RATIO) * (a - edge) {
        let g = Grid::geometric(a - edge, b - edge, points)?;
        return Grid::new(g.points().iter().map(|&d| edge + d).collect());
    }
    Grid::uniform(a, b, points)
}

/// Span ratio, measured from a finite lower end of Θ, above which the
/// working grid switches from uniform to geometric spacing.
pub const GEOMETRIC_SPAN_RATIO: f64 = 10.0;

/// Minimizers of `Σ λᵢ ρ`, `Σ λᵢ ρ*` and the estimator on one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArgminReport<T> {
    pub estimate: T,
    /// `None` when the model carries no loss `ρ`.
    pub argmin_rho: Option<T>,
    pub argmin_rho_star: T,
    /// Allowed pairwise disagreement: `2 · tolerance · (1 + |estimate|)`.
    pub tolerance: T,
    pub agree: bool,
}

/// Compares the estimator with the minimizers of the original and the
/// convexified objective.
pub fn verify_common_minimizer<T: Scalar, M: PsiModel<T> + ?Sized>(
    model: &M,
    weight: &MonotoneWeight<T>,
    sample: &WeightedSample<M::Obs, T>,
    solve: &SolveOptions<T>,
    minimize: &MinimizeOptions<T>,
    quadrature: &QuadratureOptions,
) -> Result<ArgminReport<T>> {
    let est = estimate(model, sample, solve)?.theta;
    let argmin_rho = match model.rho(&sample.observations()[0], est) {
        Some(_) => {
            let obs = sample.observations();
            let w = sample.weights();
            let f = |t: T| {
                Ok(pairwise_sum(obs.len(), &|i| {
                    if w[i] == T::zero() {
                        T::zero()
                    } else {
                        w[i] * model.rho(&obs[i], t).unwrap_or_else(T::nan)
                    }
                }))
            };
            Some(argmin_objective(f, &model.theta(), minimize)?)
        }
        None => None,
    };
    let loss = ConvexifiedLoss { model, weight, quadrature: *quadrature, solve: *solve };
    let total = loss.total(sample)?;
    let span = ParamInterval::new(weight.lo(), weight.hi())?.intersect(&model.theta())?;
    let argmin_rho_star = argmin_objective(|t| total.eval(t), &span, minimize)?;
    let tolerance = T::lit(2.0) * minimize.tolerance * (T::one() + est.abs());
    let close = |a: T, b: T| (a - b).abs() <= tolerance;
    let agree = close(est, argmin_rho_star) && argmin_rho.is_none_or(|r| close(r, est) && close(r, argmin_rho_star));
    Ok(ArgminReport { estimate: est, argmin_rho, argmin_rho_star, tolerance, agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{normal_variance_reference, LocationModel, NormalVarianceModel};

    #[test]
    fn exact_rate_reproduces_closed_form_weight() {
        let r = normal_variance_reference::<f64>(0.0, 1.5).unwrap();
        let g = Grid::<f64>::uniform(0.25 * 1.5, 4.0 * 1.5, 512).unwrap();
        let w = build_monotone_weight(&g, |s| Ok(r.q_star(s)), 1.5, &QuadratureOptions::default()).unwrap();
        for &t in g.points() {
            let exact = r.p(t);
            assert!(((w.p(t).unwrap() - exact) / exact).abs() <= 1e-6, "{t}");
        }
    }

    #[test]
    fn weighted_psi_is_linear_for_exact_weight() {
        let model = NormalVarianceModel::<f64>::new(1.0, 2.0).unwrap();
        let r = normal_variance_reference::<f64>(1.0, 2.0).unwrap();
        let g = Grid::<f64>::uniform(0.5, 8.0, 256).unwrap();
        let w = build_monotone_weight(&g, |s| Ok(r.q_star(s)), 2.0, &QuadratureOptions::default()).unwrap();
        let x = 3.0;
        let wp = weighted_psi(&model, &w, &x);
        for t in [0.5, 1.0, 4.0, 7.5] {
            let exact = r.weighted_psi(x, t);
            assert!((wp.eval(t).unwrap() - exact).abs() <= 1e-6 * (1.0 + exact.abs()), "{t} {} {exact}", wp.eval(t).unwrap());
        }
        assert_eq!(wp.eval(r.theta1(x)).unwrap(), 0.0);
    }

    #[test]
    fn mean_model_loss_is_half_square() {
        let model = LocationModel::<f64>::mean();
        let g = Grid::<f64>::uniform(-5.0, 5.0, 11).unwrap();
        let w = unit_weight(&g);
        let loss = ConvexifiedLoss::new(&model, &w);
        for (x, t) in [(1.0, 3.0), (-2.0, 4.5), (0.5, 0.5)] {
            let v = convexified_loss(&loss, &x, t).unwrap();
            let exact = (t - x) * (t - x) / 2.0;
            assert!((v - exact).abs() <= 1e-10 * (1.0 + exact), "{v} vs {exact}");
        }
    }

    #[test]
    fn loss_outside_span_is_error() {
        let model = LocationModel::<f64>::mean();
        let g = Grid::<f64>::uniform(-1.0, 1.0, 11).unwrap();
        let w = unit_weight(&g);
        let loss = ConvexifiedLoss::new(&model, &w);
        assert!(matches!(convexified_loss(&loss, &0.0, 2.0), Err(Error::OutsideGridSpan { .. })));
        assert!(matches!(convexified_loss(&loss, &3.0, 0.0), Err(Error::OutsideGridSpan { .. })));
    }

    #[test]
    fn working_grid_stays_inside_theta() {
        let model = NormalVarianceModel::<f64>::new(0.0, 1.0).unwrap();
        let g = default_working_grid(&model, &[0.1, 3.0], 100, &SolveOptions::default()).unwrap();
        assert!(g.lo() > 0.0 && g.lo() < 0.01);
        assert!((g.hi() - (9.0 + 0.5 * (9.0 - 0.01))).abs() < 1e-6);
    }

    #[test]
    fn normal_variance_common_minimizer() {
        let model = NormalVarianceModel::<f64>::new(2.0, 1.0).unwrap();
        let r = normal_variance_reference::<f64>(2.0, 1.0).unwrap();
        let sample = WeightedSample::uniform(vec![1.0, 3.0]).unwrap();
        let g = Grid::<f64>::uniform(0.25, 4.0, 256).unwrap();
        let w = build_monotone_weight(&g, |s| Ok(r.q_star(s)), 1.0, &QuadratureOptions::default()).unwrap();
        let rep = verify_common_minimizer(
            &model,
            &w,
            &sample,
            &SolveOptions::default(),
            &MinimizeOptions::default(),
            &QuadratureOptions::default(),
        )
        .unwrap();
        assert!(rep.agree, "{rep:?}");
        assert!((rep.estimate - 1.0).abs() < 1e-9);
    }
}
