use thiserror::Error;

/// Errors raised by the solvers, the representation builders and the
/// model library. Numeric payloads are reported as `f64` whatever the
/// scalar type of the computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter interval ({lo}, {hi}) is empty or degenerate")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("no sign change bracket found after {expansions} expansions (last probes {left}, {right})")]
    BracketNotFound { left: f64, right: f64, expansions: usize },
    #[error("function evaluation at t = {t} is not finite ({value})")]
    NonFiniteEvaluation { t: f64, value: f64 },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("comparison domain ({lo}, {hi}) is empty")]
    DomainEmpty { lo: f64, hi: f64 },
    #[error("denominator |psi(y, t)| = {value} below guard at t = {t}")]
    DivisionNearZero { t: f64, value: f64 },
    #[error("t = {t} lies within the exclusion radius {radius} of theta1 = {theta1}")]
    AtTheta1 { t: f64, theta1: f64, radius: f64 },
    #[error("richness violated at t = {t}: no family member with theta1 on the {side} side")]
    RichnessViolated { t: f64, side: Side },
    #[error("envelope order violated at t = {t}: q_lower = {lower} > q_upper = {upper}")]
    EnvelopeOrderViolated { t: f64, lower: f64, upper: f64 },
    #[error("anchor tau = {tau} outside the grid span [{lo}, {hi}]")]
    TauOutsideGrid { tau: f64, lo: f64, hi: f64 },
    #[error("t = {t} outside the grid span [{lo}, {hi}]")]
    OutsideGridSpan { t: f64, lo: f64, hi: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("no convergence after {iterations} iterations (bracket width {width})")]
    MaxIterations { iterations: usize, width: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Which side of `t` a richness search came up empty on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

impl Error {
    /// Stable machine-readable code used in CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInterval { .. } => "INVALID_INTERVAL",
            Error::BracketNotFound { .. } => "BRACKET_NOT_FOUND",
            Error::NonFiniteEvaluation { .. } => "NON_FINITE_EVALUATION",
            Error::InvalidWeights(_) => "INVALID_WEIGHTS",
            Error::DomainEmpty { .. } => "DOMAIN_EMPTY",
            Error::DivisionNearZero { .. } => "DIVISION_NEAR_ZERO",
            Error::AtTheta1 { .. } => "AT_THETA1",
            Error::RichnessViolated { .. } => "RICHNESS_VIOLATED",
            Error::EnvelopeOrderViolated { .. } => "ENVELOPE_ORDER_VIOLATED",
            Error::TauOutsideGrid { .. } => "TAU_OUTSIDE_GRID",
            Error::OutsideGridSpan { .. } => "OUTSIDE_GRID_SPAN",
            Error::InvalidGrid(_) => "INVALID_GRID",
            Error::MaxIterations { .. } => "MAX_ITERATIONS",
            Error::InvalidConfig(_) => "INVALID_CONFIG",
        }
    }

    /// Parameter value the error refers to, when there is one.
    pub fn location(&self) -> Option<f64> {
        match *self {
            Error::NonFiniteEvaluation { t, .. }
            | Error::DivisionNearZero { t, .. }
            | Error::AtTheta1 { t, .. }
            | Error::RichnessViolated { t, .. }
            | Error::EnvelopeOrderViolated { t, .. }
            | Error::OutsideGridSpan { t, .. } => Some(t),
            Error::TauOutsideGrid { tau, .. } => Some(tau),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
