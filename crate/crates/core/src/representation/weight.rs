use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::model::PsiModel;
use crate::quadrature::QuadratureOptions;
use crate::scalar::Scalar;

/// How `log p` is evaluated between nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    /// Straight line between node values of `log p`.
    LinearLog,
    /// Exact integral of the linearly interpolated rate `q`; agrees with
    /// the trapezoid values at the nodes and keeps `log p` differentiable.
    #[default]
    LinearRate,
}

/// `p(t) = exp(−∫_τ^t q(s) ds)` tabulated on refined nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneWeight<T> {
    tau: T,
    nodes: Vec<T>,
    log_p: Vec<T>,
    rates: Vec<T>,
    interpolation: Interpolation,
}

impl<T: Scalar> MonotoneWeight<T> {
    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn log_p_values(&self) -> &[T] {
        &self.log_p
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn with_interpolation(mut self, interpolation: Interpolation) -> Self {
        self.interpolation = interpolation;
        self
    }

    pub fn lo(&self) -> T {
        self.nodes[0]
    }

    pub fn hi(&self) -> T {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn contains(&self, t: T) -> bool {
        self.lo() <= t && t <= self.hi()
    }

    fn require(&self, t: T) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::OutsideGridSpan { t: t.as_f64(), lo: self.lo().as_f64(), hi: self.hi().as_f64() })
        }
    }

    pub fn log_p(&self, t: T) -> Result<T> {
        self.require(t)?;
        Ok(self.log_p_in(self.cell(t), t))
    }

    /// Index `i` of the node cell `[nodes[i], nodes[i+1]]` holding `t`.
    pub(crate) fn cell(&self, t: T) -> usize {
        let n = self.nodes.len();
        self.nodes.partition_point(|&s| s <= t).saturating_sub(1).min(n - 2)
    }

    pub(crate) fn log_p_in(&self, i: usize, t: T) -> T {
        let (t0, t1) = (self.nodes[i], self.nodes[i + 1]);
        let d = t - t0;
        let h = t1 - t0;
        match self.interpolation {
            Interpolation::LinearLog => self.log_p[i] + (self.log_p[i + 1] - self.log_p[i]) * (d / h),
            Interpolation::LinearRate => {
                let (q0, q1) = (self.rates[i], self.rates[i + 1]);
                self.log_p[i] - d * (q0 + (q1 - q0) * d / (T::lit(2.0) * h))
            }
        }
    }

    pub fn p(&self, t: T) -> Result<T> {
        Ok(self.log_p(t)?.exp())
    }

    /// The same weight normalized at another anchor: `p(t) / p(τ′)`.
    pub fn rebased(&self, tau: T) -> Result<Self> {
        let shift = self.log_p(tau)?;
        let mut out = self.clone();
        out.tau = tau;
        match self.nodes.iter().position(|&s| s == tau) {
            Some(k) => {
                for (i, v) in out.log_p.iter_mut().enumerate() {
                    *v = if i == k { T::zero() } else { *v - shift };
                }
            }
            None => {
                // insert tau as a node so that p(tau) = 1 exactly
                let k = self.nodes.partition_point(|&s| s < tau);
                let rate = interpolate_rate(&self.nodes, &self.rates, tau);
                for v in out.log_p.iter_mut() {
                    *v = *v - shift;
                }
                out.nodes.insert(k, tau);
                out.log_p.insert(k, T::zero());
                out.rates.insert(k, rate);
            }
        }
        Ok(out)
    }
}

fn interpolate_rate<T: Scalar>(nodes: &[T], rates: &[T], t: T) -> T {
    let n = nodes.len();
    let i = nodes.partition_point(|&s| s <= t).saturating_sub(1).min(n - 2);
    let w = (t - nodes[i]) / (nodes[i + 1] - nodes[i]);
    rates[i] + (rates[i + 1] - rates[i]) * w
}

/// Builds `p = exp(−∫_τ q)` by the composite trapezoid rule on the grid,
/// each cell split into `quadrature.refinement` pieces. `τ` becomes a node,
/// so `p(τ) = 1` exactly.
pub fn build_monotone_weight<T: Scalar>(
    grid: &Grid<T>,
    q: impl Fn(T) -> Result<T> + Sync,
    tau: T,
    quadrature: &QuadratureOptions,
) -> Result<MonotoneWeight<T>> {
    if !grid.contains(tau) {
        return Err(Error::TauOutsideGrid { tau: tau.as_f64(), lo: grid.lo().as_f64(), hi: grid.hi().as_f64() });
    }
    let mut nodes = grid.refined(quadrature.refinement).points().to_vec();
    let k = nodes.partition_point(|&s| s < tau);
    if nodes.get(k) != Some(&tau) {
        nodes.insert(k, tau);
    }
    let rates = nodes
        .par_iter()
        .map(|&t| {
            let v = q(t)?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFiniteEvaluation { t: t.as_f64(), value: v.as_f64() })
            }
        })
        .collect::<Vec<Result<T>>>()
        .into_iter()
        .collect::<Result<Vec<T>>>()?;
    let half = T::lit(0.5);
    let mut log_p = vec![T::zero(); nodes.len()];
    for i in k + 1..nodes.len() {
        log_p[i] = log_p[i - 1] - half * (nodes[i] - nodes[i - 1]) * (rates[i] + rates[i - 1]);
    }
    for i in (0..k).rev() {
        log_p[i] = log_p[i + 1] + half * (nodes[i + 1] - nodes[i]) * (rates[i] + rates[i + 1]);
    }
    Ok(MonotoneWeight { tau, nodes, log_p, rates, interpolation: Interpolation::default() })
}

/// `p ≡ 1` on the grid span.
pub fn unit_weight<T: Scalar>(grid: &Grid<T>) -> MonotoneWeight<T> {
    let nodes = grid.points().to_vec();
    let n = nodes.len();
    MonotoneWeight {
        tau: grid.lo(),
        nodes,
        log_p: vec![T::zero(); n],
        rates: vec![T::zero(); n],
        interpolation: Interpolation::default(),
    }
}

/// `t ↦ p(t) ψ(z, t)` on the span of the weight.
pub struct WeightedPsi<'a, T: Scalar, M: PsiModel<T> + ?Sized> {
    model: &'a M,
    weight: &'a MonotoneWeight<T>,
    z: &'a M::Obs,
}

impl<'a, T: Scalar, M: PsiModel<T> + ?Sized> WeightedPsi<'a, T, M> {
    pub fn eval(&self, t: T) -> Result<T> {
        Ok(self.weight.p(t)? * self.model.psi(self.z, t))
    }
}

pub fn weighted_psi<'a, T: Scalar, M: PsiModel<T> + ?Sized>(
    model: &'a M,
    weight: &'a MonotoneWeight<T>,
    z: &'a M::Obs,
) -> WeightedPsi<'a, T, M> {
    WeightedPsi { model, weight, z }
}
