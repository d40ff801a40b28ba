use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::PsiModel;
use crate::quadrature::{gauss_legendre4, QuadratureOptions};
use crate::representation::weight::MonotoneWeight;
use crate::sample::WeightedSample;
use crate::scalar::{pairwise_sum, Scalar};
use crate::solve::{theta1, SolveOptions};

/// `ρ*(z, t) = −∫_{ϑ₁(z)}^t p(s) ψ(z, s) ds`.
///
/// The integral is accumulated outward from `ϑ₁(z)` over the weight's
/// nodes with a four-point Gauss–Legendre rule per cell, so `ρ*` is smooth
/// in `t` and free of adaptive-quadrature noise.
pub struct ConvexifiedLoss<'a, T: Scalar, M: PsiModel<T> + ?Sized> {
    pub model: &'a M,
    pub weight: &'a MonotoneWeight<T>,
    pub quadrature: QuadratureOptions,
    pub solve: SolveOptions<T>,
}

impl<'a, T: Scalar, M: PsiModel<T> + ?Sized> ConvexifiedLoss<'a, T, M> {
    pub fn new(model: &'a M, weight: &'a MonotoneWeight<T>) -> Self {
        ConvexifiedLoss { model, weight, quadrature: QuadratureOptions::default(), solve: SolveOptions::default() }
    }

    /// Loss for one observation, with `ϑ₁(z)` located and the running
    /// integral tabulated once.
    pub fn for_observation<'b>(&'b self, z: &'b M::Obs) -> Result<ObservationLoss<'b, T, M>> {
        let w = self.weight;
        let th = theta1(self.model, z, &self.solve)?.theta;
        if !w.contains(th) {
            return Err(Error::OutsideGridSpan { t: th.as_f64(), lo: w.lo().as_f64(), hi: w.hi().as_f64() });
        }
        let nodes = w.nodes();
        let k = w.cell(th);
        let mut acc = vec![T::zero(); nodes.len()];
        acc[k] = self.piece(z, k, th, nodes[k]);
        acc[k + 1] = self.piece(z, k, th, nodes[k + 1]);
        for i in k + 1..nodes.len() - 1 {
            acc[i + 1] = acc[i] + self.piece(z, i, nodes[i], nodes[i + 1]);
        }
        for i in (0..k).rev() {
            acc[i] = acc[i + 1] + self.piece(z, i, nodes[i + 1], nodes[i]);
        }
        Ok(ObservationLoss { loss: self, z, theta1: th, cell: k, acc })
    }

    /// `Σ λᵢ ρ*(xᵢ, ·)`; observations with zero weight are skipped.
    pub fn total<'b>(&'b self, sample: &'b WeightedSample<M::Obs, T>) -> Result<TotalLoss<'b, T, M>> {
        let parts = sample
            .observations()
            .par_iter()
            .zip(sample.weights().par_iter())
            .filter(|(_, w)| **w > T::zero())
            .map(|(z, &w)| Ok((self.for_observation(z)?, w)))
            .collect::<Vec<Result<_>>>()
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(TotalLoss { parts })
    }

    /// Signed `∫_a^b p ψ(z, ·)` with `a` and `b` inside node cell `i`.
    fn piece(&self, z: &M::Obs, i: usize, a: T, b: T) -> T {
        let w = self.weight;
        gauss_legendre4(&|s: T| w.log_p_in(i, s).exp() * self.model.psi(z, s), a, b)
    }
}

pub struct ObservationLoss<'b, T: Scalar, M: PsiModel<T> + ?Sized> {
    loss: &'b ConvexifiedLoss<'b, T, M>,
    z: &'b M::Obs,
    theta1: T,
    cell: usize,
    /// `∫_{ϑ₁}^{nodes[i]} p ψ(z, ·)`
    acc: Vec<T>,
}

impl<'b, T: Scalar, M: PsiModel<T> + ?Sized> ObservationLoss<'b, T, M> {
    pub fn theta1(&self) -> T {
        self.theta1
    }

    pub fn eval(&self, t: T) -> Result<T> {
        let w = self.loss.weight;
        if !w.contains(t) {
            return Err(Error::OutsideGridSpan { t: t.as_f64(), lo: w.lo().as_f64(), hi: w.hi().as_f64() });
        }
        let nodes = w.nodes();
        let i = w.cell(t);
        let k = self.cell;
        // start from the node between ϑ₁ and t so the pieces never cancel
        let integral = if i == k {
            self.loss.piece(self.z, i, self.theta1, t)
        } else if i > k {
            self.acc[i] + self.loss.piece(self.z, i, nodes[i], t)
        } else {
            self.acc[i + 1] + self.loss.piece(self.z, i, nodes[i + 1], t)
        };
        Ok(-integral)
    }
}

pub struct TotalLoss<'b, T: Scalar, M: PsiModel<T> + ?Sized> {
    parts: Vec<(ObservationLoss<'b, T, M>, T)>,
}

impl<'b, T: Scalar, M: PsiModel<T> + ?Sized> TotalLoss<'b, T, M> {
    pub fn eval(&self, t: T) -> Result<T> {
        let values = self.parts.iter().map(|(l, w)| Ok(*w * l.eval(t)?)).collect::<Result<Vec<T>>>()?;
        Ok(pairwise_sum(values.len(), &|i| values[i]))
    }
}

/// `ρ*(z, t)` for a single call; see [`ConvexifiedLoss::for_observation`]
/// to reuse the tabulation across many `t`.
pub fn convexified_loss<T: Scalar, M: PsiModel<T> + ?Sized>(
    loss: &ConvexifiedLoss<'_, T, M>,
    z: &M::Obs,
    t: T,
) -> Result<T> {
    loss.for_observation(z)?.eval(t)
}
