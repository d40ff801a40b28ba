use crate::error::{Error, Result};
use crate::interval::ParamInterval;
use crate::model::PsiModel;
use crate::scalar::Scalar;

/// Odd, decreasing-in-`t` score `g` for `ψ(x, t) = g(x − t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Score<T> {
    /// `g(u) = u`; the estimator is the weighted mean.
    Identity,
    /// `g(u) = clamp(u, −k, k)`.
    Huber { k: T },
}

/// Huber's conventional tuning constant.
pub const DEFAULT_HUBER_K: f64 = 1.345;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocationModel<T> {
    pub score: Score<T>,
}

impl<T: Scalar> LocationModel<T> {
    pub fn mean() -> Self {
        LocationModel { score: Score::Identity }
    }

    pub fn huber(k: T) -> Result<Self> {
        if !(k > T::zero() && k.is_finite()) {
            return Err(Error::InvalidConfig(format!("Huber constant must be positive, got {k}")));
        }
        Ok(LocationModel { score: Score::Huber { k } })
    }

    fn g(&self, u: T) -> T {
        match self.score {
            Score::Identity => u,
            Score::Huber { k } => u.max(-k).min(k),
        }
    }
}

impl<T: Scalar> PsiModel<T> for LocationModel<T> {
    type Obs = T;

    fn theta(&self) -> ParamInterval<T> {
        ParamInterval::real_line()
    }

    fn psi(&self, x: &T, t: T) -> T {
        self.g(*x - t)
    }

    fn d2psi(&self, x: &T, t: T) -> Option<T> {
        Some(match self.score {
            Score::Identity => -T::one(),
            Score::Huber { k } if (*x - t).abs() <= k => -T::one(),
            Score::Huber { .. } => T::zero(),
        })
    }

    fn theta1_closed_form(&self, x: &T) -> Option<T> {
        Some(*x)
    }

    fn is_continuous(&self) -> bool {
        true
    }

    fn rho(&self, x: &T, t: T) -> Option<T> {
        let u = *x - t;
        let half = T::lit(0.5);
        Some(match self.score {
            Score::Identity => half * u * u,
            Score::Huber { k } if u.abs() <= k => half * u * u,
            Score::Huber { k } => k * u.abs() - half * k * k,
        })
    }
}

/// `ψ(x, t) = 1` for `t < x` and `−1` otherwise: the weighted median.
/// Never zero, so every crossing is a jump.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SignModel;

impl<T: Scalar> PsiModel<T> for SignModel {
    type Obs = T;

    fn theta(&self) -> ParamInterval<T> {
        ParamInterval::real_line()
    }

    fn psi(&self, x: &T, t: T) -> T {
        if t < *x {
            T::one()
        } else {
            -T::one()
        }
    }

    fn theta1_closed_form(&self, x: &T) -> Option<T> {
        Some(*x)
    }

    fn rho(&self, x: &T, t: T) -> Option<T> {
        Some((*x - t).abs())
    }
}

/// `ψ(x, t) = (x − t) · exp(a · x · sin(b · t))`.
///
/// Each `ψ(x, ·)` changes sign exactly at `x`, but the positive factor
/// makes `−ψ(x, t)/ψ(y, t)` oscillate for large enough `a · b`, so
/// weighted two-point sums can change sign several times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatingModel<T> {
    pub a: T,
    pub b: T,
}

impl<T: Scalar> OscillatingModel<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidConfig("oscillating model parameters must be finite".into()));
        }
        Ok(OscillatingModel { a, b })
    }

    fn factor(&self, x: T, t: T) -> T {
        (self.a * x * (self.b * t).sin()).exp()
    }
}

impl<T: Scalar> PsiModel<T> for OscillatingModel<T> {
    type Obs = T;

    fn theta(&self) -> ParamInterval<T> {
        ParamInterval::real_line()
    }

    fn psi(&self, x: &T, t: T) -> T {
        (*x - t) * self.factor(*x, t)
    }

    fn d2psi(&self, x: &T, t: T) -> Option<T> {
        let e = self.factor(*x, t);
        Some(e * (-T::one() + (*x - t) * self.a * *x * self.b * (self.b * t).cos()))
    }

    fn theta1_closed_form(&self, x: &T) -> Option<T> {
        Some(*x)
    }

    fn is_continuous(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::WeightedSample;
    use crate::solve::{estimate, theta1, Crossing, SolveOptions};

    #[test]
    fn huber_theta1_at_zero() {
        let m = LocationModel::<f64>::huber(DEFAULT_HUBER_K).unwrap();
        let r = theta1(&m, &0.0, &SolveOptions::default()).unwrap();
        assert!(r.theta.abs() <= 1e-10);
        // brute-force sign scan on a grid around the observation
        let grid: Vec<f64> = (-1000..=1000).map(|i| i as f64 * 0.01).collect();
        let change = grid.windows(2).find(|w| m.psi(&0.0, w[0]) > 0.0 && m.psi(&0.0, w[1]) <= 0.0).unwrap();
        assert!(change[0] <= r.theta + 0.01 && r.theta <= change[1] + 0.01);
    }

    #[test]
    fn mean_theta1_is_identity() {
        let m = LocationModel::<f64>::mean();
        for a in [-7.25, 0.0, 3.5, 1e5] {
            let r = theta1(&m, &a, &SolveOptions::default()).unwrap();
            assert!((r.theta - a).abs() <= 1e-10 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn weighted_median_is_jump() {
        let s = WeightedSample::new(vec![1.0_f64, 2.0, 7.0], vec![1.0, 1.0, 1.5]).unwrap();
        let r = estimate(&SignModel, &s, &SolveOptions::default()).unwrap();
        assert!((r.theta - 2.0).abs() <= 1e-10 * 3.0);
        assert_eq!(r.crossing, Crossing::JumpCrossing);
    }

    #[test]
    fn oscillating_derivative_matches_fd() {
        let m = OscillatingModel::<f64>::new(2.0, 20.0).unwrap();
        for &(x, t) in &[(1.0, 0.3), (0.5, -0.2), (2.0, 1.1)] {
            let h = 1e-6;
            let fd = (m.psi(&x, t + h) - m.psi(&x, t - h)) / (2.0 * h);
            let d = m.d2psi(&x, t).unwrap();
            assert!(((fd - d) / d).abs() < 1e-5);
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(LocationModel::<f64>::huber(0.0).is_err());
        assert!(OscillatingModel::<f64>::new(f64::NAN, 1.0).is_err());
    }
}
