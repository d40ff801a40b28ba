use rayon::prelude::*;

use crate::error::{Error, Result, Side};
use crate::grid::Grid;
use crate::model::{d2psi_or_fd, PsiModel};
use crate::scalar::Scalar;
use crate::solve::{theta1, SolveOptions};

/// Finite family standing in for the observation space, plus the grid the
/// envelopes are tabulated on.
#[derive(Debug, Clone)]
pub struct EnvelopeConfig<O, T> {
    pub family: Vec<O>,
    pub grid: Grid<T>,
    /// Members whose `ϑ₁` lies closer than this to `t` are left out at `t`.
    /// `None` uses `1e−4 · (1 + |ϑ₁|)` per member.
    pub exclusion_radius: Option<T>,
    pub solve: SolveOptions<T>,
}

impl<O, T: Scalar> EnvelopeConfig<O, T> {
    pub fn new(family: Vec<O>, grid: Grid<T>) -> Self {
        EnvelopeConfig { family, grid, exclusion_radius: None, solve: SolveOptions::default() }
    }
}

pub fn default_exclusion_radius<T: Scalar>(theta1: T) -> T {
    T::lit(1e-4) * (T::one() + theta1.abs())
}

fn ratio_at<T: Scalar, M: PsiModel<T> + ?Sized>(model: &M, z: &M::Obs, theta1: T, radius: T, t: T) -> Result<T> {
    if (t - theta1).abs() < radius {
        return Err(Error::AtTheta1 { t: t.as_f64(), theta1: theta1.as_f64(), radius: radius.as_f64() });
    }
    let v = d2psi_or_fd(model, z, t) / model.psi(z, t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteEvaluation { t: t.as_f64(), value: v.as_f64() })
    }
}

/// `∂ψ(z, t)/∂t ÷ ψ(z, t)`, refused inside the default exclusion radius of `ϑ₁(z)`.
pub fn log_derivative_ratio<T: Scalar, M: PsiModel<T> + ?Sized>(
    model: &M,
    z: &M::Obs,
    t: T,
    opts: &SolveOptions<T>,
) -> Result<T> {
    let th = theta1(model, z, opts)?.theta;
    ratio_at(model, z, th, default_exclusion_radius(th), t)
}

struct Member<'a, O, T> {
    obs: &'a O,
    theta1: T,
    radius: T,
}

/// Pointwise sup/inf of the log-derivative ratio over a finite family.
pub struct FamilyEnvelope<'a, T: Scalar, M: PsiModel<T> + ?Sized> {
    model: &'a M,
    members: Vec<Member<'a, M::Obs, T>>,
}

impl<'a, T: Scalar, M: PsiModel<T> + ?Sized> FamilyEnvelope<'a, T, M> {
    pub fn new(model: &'a M, family: &'a [M::Obs], radius: Option<T>, opts: &SolveOptions<T>) -> Result<Self> {
        if family.is_empty() {
            return Err(Error::InvalidConfig("envelope family is empty".into()));
        }
        let members = family
            .par_iter()
            .map(|obs| {
                let th = theta1(model, obs, opts)?.theta;
                Ok(Member { obs, theta1: th, radius: radius.unwrap_or_else(|| default_exclusion_radius(th)) })
            })
            .collect::<Vec<Result<_>>>()
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(FamilyEnvelope { model, members })
    }

    /// `ϑ₁` of every member, in family order.
    pub fn theta1s(&self) -> Vec<T> {
        self.members.iter().map(|m| m.theta1).collect()
    }

    /// Max of the ratio over members with `t < ϑ₁(y)`.
    pub fn q_lower(&self, t: T) -> Result<T> {
        self.extremum(t, Side::Right)
    }

    /// Min of the ratio over members with `ϑ₁(x) < t`.
    pub fn q_upper(&self, t: T) -> Result<T> {
        self.extremum(t, Side::Left)
    }

    fn extremum(&self, t: T, side: Side) -> Result<T> {
        let mut best: Option<T> = None;
        for m in &self.members {
            let on_side = match side {
                Side::Right => t < m.theta1,
                Side::Left => m.theta1 < t,
            };
            if !on_side || (t - m.theta1).abs() < m.radius {
                continue;
            }
            let r = ratio_at(self.model, m.obs, m.theta1, m.radius, t)?;
            best = Some(match (best, side) {
                (None, _) => r,
                (Some(b), Side::Right) => b.max(r),
                (Some(b), Side::Left) => b.min(r),
            });
        }
        best.ok_or(Error::RichnessViolated { t: t.as_f64(), side })
    }
}

/// Envelopes tabulated on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeTable<T> {
    pub grid: Grid<T>,
    pub q_lower: Vec<T>,
    pub q_upper: Vec<T>,
}

impl<T: Scalar> EnvelopeTable<T> {
    /// `q_upper − q_lower` per grid point.
    pub fn gaps(&self) -> Vec<T> {
        self.q_upper.iter().zip(&self.q_lower).map(|(u, l)| *u - *l).collect()
    }

    pub fn max_gap(&self) -> T {
        self.gaps().into_iter().fold(T::zero(), T::max)
    }
}

/// Relative slack allowed in `q_lower ≤ q_upper`.
pub const ENVELOPE_ORDER_TOLERANCE: f64 = 1e-9;

/// Tabulates `q_lower` (the sup over members right of `t`) and `q_upper`
/// (the inf over members left of `t`) and checks their order.
pub fn q_star_envelope<T: Scalar, M: PsiModel<T> + ?Sized>(
    model: &M,
    cfg: &EnvelopeConfig<M::Obs, T>,
) -> Result<EnvelopeTable<T>> {
    let theta = model.theta();
    if let Some(t) = cfg.grid.points().iter().find(|t| !theta.contains(**t)) {
        return Err(Error::InvalidGrid(format!("grid point {t} outside the parameter interval")));
    }
    let env = FamilyEnvelope::new(model, &cfg.family, cfg.exclusion_radius, &cfg.solve)?;
    let rows = cfg
        .grid
        .points()
        .par_iter()
        .map(|&t| Ok((env.q_lower(t)?, env.q_upper(t)?)))
        .collect::<Vec<Result<(T, T)>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let tol = T::lit(ENVELOPE_ORDER_TOLERANCE);
    for (&t, &(lo, up)) in cfg.grid.points().iter().zip(&rows) {
        let scale = T::one().max(lo.abs()).max(up.abs());
        if lo > up + tol * scale {
            return Err(Error::EnvelopeOrderViolated { t: t.as_f64(), lower: lo.as_f64(), upper: up.as_f64() });
        }
    }
    let (q_lower, q_upper) = rows.into_iter().unzip();
    Ok(EnvelopeTable { grid: cfg.grid.clone(), q_lower, q_upper })
}
