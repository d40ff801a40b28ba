use crate::error::{Error, Result};
use crate::interval::ParamInterval;
use crate::model::PsiModel;
use crate::sample::WeightedSample;
use crate::scalar::{pairwise_sum, Scalar};

/// Likelihood equation of the variance of a normal distribution with
/// known mean `m`:
///
/// `ψ(x, σ²) = ((x − m)² − σ²) / (2 (σ²)²)` on `Θ = (0, ∞)`.
///
/// `sigma0_sq` is the anchor used by the closed-form weight
/// `p(σ²) = (σ²/σ₀²)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalVarianceModel<T> {
    pub m: T,
    pub sigma0_sq: T,
}

impl<T: Scalar> NormalVarianceModel<T> {
    pub fn new(m: T, sigma0_sq: T) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidConfig(format!("mean m must be finite, got {m}")));
        }
        if !(sigma0_sq > T::zero() && sigma0_sq.is_finite()) {
            return Err(Error::InvalidConfig(format!("sigma0_sq must be positive, got {sigma0_sq}")));
        }
        Ok(NormalVarianceModel { m, sigma0_sq })
    }

    fn sq_dev(&self, x: T) -> T {
        let d = x - self.m;
        d * d
    }
}

impl<T: Scalar> PsiModel<T> for NormalVarianceModel<T> {
    type Obs = T;

    fn theta(&self) -> ParamInterval<T> {
        ParamInterval::positive()
    }

    fn psi(&self, x: &T, s: T) -> T {
        (self.sq_dev(*x) - s) / (T::lit(2.0) * s * s)
    }

    fn d2psi(&self, x: &T, s: T) -> Option<T> {
        Some((s - T::lit(2.0) * self.sq_dev(*x)) / (T::lit(2.0) * s * s * s))
    }

    fn theta1_closed_form(&self, x: &T) -> Option<T> {
        Some(self.sq_dev(*x))
    }

    fn is_continuous(&self) -> bool {
        true
    }

    /// Negative log-likelihood up to an additive constant.
    fn rho(&self, x: &T, s: T) -> Option<T> {
        Some(s.ln() / T::lit(2.0) + self.sq_dev(*x) / (T::lit(2.0) * s))
    }
}

/// Closed forms of the normal-variance example.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalVarianceReference<T> {
    pub m: T,
    pub sigma0_sq: T,
}

pub fn normal_variance_reference<T: Scalar>(m: T, sigma0_sq: T) -> Result<NormalVarianceReference<T>> {
    NormalVarianceModel::new(m, sigma0_sq)?;
    Ok(NormalVarianceReference { m, sigma0_sq })
}

impl<T: Scalar> NormalVarianceReference<T> {
    pub fn theta1(&self, x: T) -> T {
        (x - self.m) * (x - self.m)
    }

    /// Lower envelope over the whole real line: `−2/s`.
    pub fn q_star(&self, s: T) -> T {
        -T::lit(2.0) / s
    }

    /// `(σ²/σ₀²)²`.
    pub fn p(&self, s: T) -> T {
        let r = s / self.sigma0_sq;
        r * r
    }

    /// `∂ψ/∂t / ψ = −2/s − 1/((x − m)² − s)`.
    pub fn log_derivative_ratio(&self, x: T, s: T) -> T {
        -T::lit(2.0) / s - T::one() / (self.theta1(x) - s)
    }

    /// `(t − (x − m)²)² / (4 σ₀⁴)`.
    pub fn rho_star(&self, x: T, t: T) -> T {
        let d = t - self.theta1(x);
        d * d / (T::lit(4.0) * self.sigma0_sq * self.sigma0_sq)
    }

    /// `p(σ²) ψ(x, σ²) = ((x − m)² − σ²) / (2 σ₀⁴)`.
    pub fn weighted_psi(&self, x: T, s: T) -> T {
        (self.theta1(x) - s) / (T::lit(2.0) * self.sigma0_sq * self.sigma0_sq)
    }

    pub fn neg_log_likelihood(&self, x: T, s: T) -> T {
        s.ln() / T::lit(2.0) + self.theta1(x) / (T::lit(2.0) * s)
    }

    /// Weighted mean of `(xᵢ − m)²`.
    pub fn mle(&self, sample: &WeightedSample<T, T>) -> T {
        let obs = sample.observations();
        let w = sample.weights();
        pairwise_sum(obs.len(), &|i| w[i] * self.theta1(obs[i])) / sample.total_weight()
    }
}

/// Exact sign-change point of `Σ λᵢ ψ(xᵢ, ·)` for the normal-variance model.
pub fn weighted_mle_oracle<T: Scalar>(model: &NormalVarianceModel<T>, sample: &WeightedSample<T, T>) -> Result<T> {
    let total = sample.total_weight();
    if !(total > T::zero()) {
        return Err(Error::InvalidWeights("weights sum to zero".into()));
    }
    let reference = NormalVarianceReference { m: model.m, sigma0_sq: model.sigma0_sq };
    Ok(reference.mle(sample))
}
