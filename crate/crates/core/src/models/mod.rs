//! Built-in ψ-models with closed forms.

mod location;
mod normal_variance;

use std::collections::BTreeMap;

pub use location::{LocationModel, OscillatingModel, Score, SignModel, DEFAULT_HUBER_K};
pub use normal_variance::{
    normal_variance_reference, weighted_mle_oracle, NormalVarianceModel, NormalVarianceReference,
};

use crate::error::{Error, Result};
use crate::interval::ParamInterval;
use crate::model::PsiModel;
use crate::scalar::Scalar;

/// Any built-in model, addressable by name and string parameters.
///
/// | name              | parameters (defaults)              |
/// |-------------------|------------------------------------|
/// | `normal_variance` | `m` (0), `sigma0_sq` (1)           |
/// | `location`        | `score` (`identity`/`huber`), `k` (1.345) |
/// | `sign`            | none                               |
/// | `oscillating`     | `a` (2), `b` (20)                  |
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuiltinModel<T> {
    NormalVariance(NormalVarianceModel<T>),
    Location(LocationModel<T>),
    Sign(SignModel),
    Oscillating(OscillatingModel<T>),
}

pub const MODEL_NAMES: [&str; 4] = ["normal_variance", "location", "sign", "oscillating"];

fn number<T: Scalar>(params: &BTreeMap<String, String>, key: &str, default: f64) -> Result<T> {
    match params.get(key) {
        None => Ok(T::lit(default)),
        Some(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(T::lit)
            .ok_or_else(|| Error::InvalidConfig(format!("parameter {key}={v} is not a finite number"))),
    }
}

fn check_keys(name: &str, params: &BTreeMap<String, String>, allowed: &[&str]) -> Result<()> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::InvalidConfig(format!("unknown parameter '{k}' for model {name}"))),
        None => Ok(()),
    }
}

impl<T: Scalar> BuiltinModel<T> {
    pub fn from_name(name: &str, params: &BTreeMap<String, String>) -> Result<Self> {
        match name {
            "normal_variance" => {
                check_keys(name, params, &["m", "sigma0_sq"])?;
                Ok(BuiltinModel::NormalVariance(NormalVarianceModel::new(
                    number(params, "m", 0.0)?,
                    number(params, "sigma0_sq", 1.0)?,
                )?))
            }
            "location" => {
                check_keys(name, params, &["score", "k"])?;
                match params.get("score").map(String::as_str).unwrap_or("identity") {
                    "identity" | "mean" => Ok(BuiltinModel::Location(LocationModel::mean())),
                    "huber" => Ok(BuiltinModel::Location(LocationModel::huber(number(params, "k", DEFAULT_HUBER_K)?)?)),
                    other => Err(Error::InvalidConfig(format!("unknown location score '{other}'"))),
                }
            }
            "sign" | "median" => {
                check_keys(name, params, &[])?;
                Ok(BuiltinModel::Sign(SignModel))
            }
            "oscillating" => {
                check_keys(name, params, &["a", "b"])?;
                Ok(BuiltinModel::Oscillating(OscillatingModel::new(number(params, "a", 2.0)?, number(params, "b", 20.0)?)?))
            }
            other => Err(Error::InvalidConfig(format!(
                "unknown model '{other}' (expected one of {})",
                MODEL_NAMES.join(", ")
            ))),
        }
    }

    /// Closed-form reference bundle, for the normal-variance model.
    pub fn reference(&self) -> Option<NormalVarianceReference<T>> {
        match self {
            BuiltinModel::NormalVariance(m) => Some(NormalVarianceReference { m: m.m, sigma0_sq: m.sigma0_sq }),
            _ => None,
        }
    }
}

macro_rules! delegate {
    ($self:ident, $m:ident => $e:expr) => {
        match $self {
            BuiltinModel::NormalVariance($m) => $e,
            BuiltinModel::Location($m) => $e,
            BuiltinModel::Sign($m) => $e,
            BuiltinModel::Oscillating($m) => $e,
        }
    };
}

impl<T: Scalar> PsiModel<T> for BuiltinModel<T> {
    type Obs = T;

    fn theta(&self) -> ParamInterval<T> {
        delegate!(self, m => PsiModel::<T>::theta(m))
    }
    fn psi(&self, x: &T, t: T) -> T {
        delegate!(self, m => m.psi(x, t))
    }
    fn d2psi(&self, x: &T, t: T) -> Option<T> {
        delegate!(self, m => m.d2psi(x, t))
    }
    fn theta1_closed_form(&self, x: &T) -> Option<T> {
        delegate!(self, m => m.theta1_closed_form(x))
    }
    fn is_continuous(&self) -> bool {
        delegate!(self, m => PsiModel::<T>::is_continuous(m))
    }
    fn rho(&self, x: &T, t: T) -> Option<T> {
        delegate!(self, m => m.rho(x, t))
    }
}
