//! Points of sign change and the weighted generalized ψ-estimator.
//!
//! A function `f` on Θ has a point of sign change of decreasing type at
//! `ϑ` when `f > 0` strictly left of `ϑ` and `f < 0` strictly right of it.
//! Nothing is assumed about `f(ϑ)` itself or about continuity, so the
//! default refinement is sign bisection. Brent's method is used only for
//! models that declare continuity in the parameter.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::ParamInterval;
use crate::model::PsiModel;
use crate::sample::WeightedSample;
use crate::scalar::{pairwise_sum, Scalar};

/// How the located point is classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Crossing {
    /// The function value at the located point is zero up to the residual
    /// tolerance.
    ZeroCrossing,
    /// The function jumps over zero.
    JumpCrossing,
}

/// Bracket refinement strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Refinement {
    /// Brent when the model declares continuity, bisection otherwise.
    /// Plain functions passed to [`locate_sign_change`] use bisection.
    #[default]
    Auto,
    Bisection,
    Brent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions<T> {
    /// Final bracket width, relative: width ≤ `tolerance · (1 + |ϑ|)`.
    pub tolerance: T,
    /// Residual tolerance relative to the function scale at the initial bracket.
    pub residual_tolerance: T,
    pub max_iterations: usize,
    /// Budget of geometric expansion steps while searching for a bracket.
    pub max_expansions: usize,
    /// Starting point of the bracket search; defaults to a point inside Θ.
    pub initial_probe: Option<T>,
    pub refinement: Refinement,
}

impl<T: Scalar> Default for SolveOptions<T> {
    fn default() -> Self {
        SolveOptions {
            tolerance: T::lit(1e-10),
            residual_tolerance: T::lit(1e-8),
            max_iterations: 2000,
            max_expansions: 200,
            initial_probe: None,
            refinement: Refinement::Auto,
        }
    }
}

impl<T: Scalar> SolveOptions<T> {
    pub fn with_tolerance(mut self, tolerance: T) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_probe(mut self, probe: T) -> Self {
        self.initial_probe = Some(probe);
        self
    }

    pub fn with_refinement(mut self, refinement: Refinement) -> Self {
        self.refinement = refinement;
        self
    }

    /// Absolute bracket width allowed around `t`.
    pub fn width_at(&self, t: T) -> T {
        self.tolerance * (T::one() + t.abs())
    }

    fn resolved(&self, continuous: bool) -> Refinement {
        match self.refinement {
            Refinement::Auto if continuous => Refinement::Brent,
            Refinement::Auto => Refinement::Bisection,
            r => r,
        }
    }
}

/// A located point of sign change.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignChangeResult<T> {
    pub theta: T,
    pub bracket_lo: T,
    pub bracket_hi: T,
    /// Function value at `theta`.
    pub residual: T,
    pub crossing: Crossing,
    pub iterations: usize,
    /// Function scale used for the residual test: the larger of `|f|` at
    /// the ends of the initial bracket.
    pub scale: T,
}

impl<T: Scalar> SignChangeResult<T> {
    pub fn width(&self) -> T {
        self.bracket_hi - self.bracket_lo
    }
}

fn eval<T: Scalar>(f: &impl Fn(T) -> T, t: T) -> Result<T> {
    let v = f(t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteEvaluation { t: t.as_f64(), value: v.as_f64() })
    }
}

enum Search<T> {
    Bracket { pos: T, f_pos: T, neg: T, f_neg: T, expansions: usize },
    Zero { at: T, scale: T, expansions: usize },
}

/// The `k`-th probe of a geometric walk from `start` toward `end`.
fn probe_toward<T: Scalar>(start: T, end: T, step0: T, k: usize) -> T {
    let two_k = T::lit(2.0).powi(k as i32);
    if end.is_finite() {
        end - (end - start) / (two_k * T::lit(2.0))
    } else if end > start {
        start + step0 * two_k
    } else {
        start - step0 * two_k
    }
}

fn find_bracket<T: Scalar>(
    f: &impl Fn(T) -> T,
    theta: &ParamInterval<T>,
    opts: &SolveOptions<T>,
) -> Result<Search<T>> {
    let p = opts.initial_probe.unwrap_or_else(|| theta.default_probe());
    if !theta.contains(p) {
        return Err(Error::InvalidConfig(format!("initial probe {p} outside the parameter interval")));
    }
    let fp = eval(f, p)?;
    if fp == T::zero() {
        return Ok(Search::Zero { at: p, scale: T::zero(), expansions: 0 });
    }
    let going_right = fp > T::zero();
    let end = if going_right { theta.hi() } else { theta.lo() };
    let margin = if end.is_finite() { T::lit(1e-14) * end.abs() } else { T::zero() };
    let step0 = T::one().max(p.abs());
    let mut anchor = p;
    let mut f_anchor = fp;
    let mut last = p;
    for k in 0..opts.max_expansions {
        let t = probe_toward(p, end, step0, k);
        let inside = theta.contains(t)
            && if going_right { t < end - margin && t > last } else { t > end + margin && t < last };
        if !inside || !t.is_finite() {
            break;
        }
        last = t;
        let ft = eval(f, t)?;
        if ft == T::zero() {
            return Ok(Search::Zero { at: t, scale: f_anchor.abs(), expansions: k + 1 });
        }
        let same_side = (ft > T::zero()) == going_right;
        if same_side {
            // tighten: the sign change lies beyond the latest same-signed probe
            anchor = t;
            f_anchor = ft;
            continue;
        }
        return Ok(if going_right {
            Search::Bracket { pos: anchor, f_pos: f_anchor, neg: t, f_neg: ft, expansions: k + 1 }
        } else {
            Search::Bracket { pos: t, f_pos: ft, neg: anchor, f_neg: f_anchor, expansions: k + 1 }
        });
    }
    let (left, right) = if going_right { (anchor, last) } else { (last, anchor) };
    Err(Error::BracketNotFound {
        left: left.as_f64(),
        right: right.as_f64(),
        expansions: opts.max_expansions,
    })
}

fn zero_result<T: Scalar>(at: T, scale: T, iterations: usize, opts: &SolveOptions<T>) -> SignChangeResult<T> {
    let half = opts.width_at(at) / T::lit(2.0);
    SignChangeResult {
        theta: at,
        bracket_lo: at - half,
        bracket_hi: at + half,
        residual: T::zero(),
        crossing: Crossing::ZeroCrossing,
        iterations,
        scale,
    }
}

fn classify<T: Scalar>(residual: T, scale: T, opts: &SolveOptions<T>) -> Crossing {
    if residual.abs() <= opts.residual_tolerance * scale {
        Crossing::ZeroCrossing
    } else {
        Crossing::JumpCrossing
    }
}

struct Refined<T> {
    lo: T,
    hi: T,
    theta: T,
    residual: Option<T>,
    iterations: usize,
    zero: bool,
}

fn bisect<T: Scalar>(f: &impl Fn(T) -> T, mut lo: T, mut hi: T, opts: &SolveOptions<T>) -> Result<Refined<T>> {
    let two = T::lit(2.0);
    let mut iterations = 0;
    loop {
        let mid = lo + (hi - lo) / two;
        if hi - lo <= opts.width_at(mid) || mid <= lo || mid >= hi {
            return Ok(Refined { lo, hi, theta: mid, residual: None, iterations, zero: false });
        }
        if iterations >= opts.max_iterations {
            return Err(Error::MaxIterations { iterations, width: (hi - lo).as_f64() });
        }
        iterations += 1;
        let fm = eval(f, mid)?;
        if fm > T::zero() {
            lo = mid;
        } else if fm < T::zero() {
            hi = mid;
        } else {
            return Ok(Refined { lo, hi, theta: mid, residual: Some(fm), iterations, zero: true });
        }
    }
}

/// Brent's method on a bracket with `f(pos) > 0 > f(neg)`, `pos < neg`.
fn brent<T: Scalar>(
    f: &impl Fn(T) -> T,
    pos: T,
    f_pos: T,
    neg: T,
    f_neg: T,
    opts: &SolveOptions<T>,
) -> Result<Option<Refined<T>>> {
    let (two, three, half) = (T::lit(2.0), T::lit(3.0), T::lit(0.5));
    let eps = T::epsilon();
    let (mut a, mut fa, mut b, mut fb) = (pos, f_pos, neg, f_neg);
    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;
    let mut iterations = 0;
    loop {
        if (fb > T::zero()) == (fc > T::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * eps * b.abs() + T::lit(0.45) * opts.width_at(b);
        let xm = half * (c - b);
        if fb == T::zero() {
            return Ok(Some(Refined { lo: b, hi: b, theta: b, residual: Some(fb), iterations, zero: true }));
        }
        if xm.abs() <= tol1 {
            let (lo, hi, f_lo) = if b < c { (b, c, fb) } else { (c, b, fc) };
            if !(f_lo > T::zero()) {
                // orientation flipped: not a decreasing-type change on this bracket
                return Ok(None);
            }
            return Ok(Some(Refined { lo, hi, theta: b, residual: Some(fb), iterations, zero: false }));
        }
        if iterations >= opts.max_iterations {
            return Err(Error::MaxIterations { iterations, width: (c - b).abs().as_f64() });
        }
        iterations += 1;
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = three * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 { b + d } else if xm > T::zero() { b + tol1 } else { b - tol1 };
        fb = eval(f, b)?;
    }
}

/// Locates the point of sign change of decreasing type of `f` on `theta`.
///
/// The bracket is found by geometric expansion from the initial probe and
/// refined by sign bisection (or Brent when `opts.refinement` is
/// [`Refinement::Brent`]). An exact zero met anywhere along the way is
/// taken as the sign-change point, and the reported bracket is then the
/// symmetric tolerance interval around it.
pub fn locate_sign_change<T: Scalar>(
    f: impl Fn(T) -> T,
    theta: &ParamInterval<T>,
    opts: &SolveOptions<T>,
) -> Result<SignChangeResult<T>> {
    locate_with(&f, theta, opts, false)
}

fn locate_with<T: Scalar>(
    f: &impl Fn(T) -> T,
    theta: &ParamInterval<T>,
    opts: &SolveOptions<T>,
    continuous: bool,
) -> Result<SignChangeResult<T>> {
    let (pos, f_pos, neg, f_neg, expansions) = match find_bracket(f, theta, opts)? {
        Search::Zero { at, scale, expansions } => return Ok(zero_result(at, scale, expansions, opts)),
        Search::Bracket { pos, f_pos, neg, f_neg, expansions } => (pos, f_pos, neg, f_neg, expansions),
    };
    let scale = f_pos.abs().max(f_neg.abs());
    let refined = match opts.resolved(continuous) {
        Refinement::Brent => match brent(f, pos, f_pos, neg, f_neg, opts)? {
            Some(r) => r,
            None => bisect(f, pos, neg, opts)?,
        },
        _ => bisect(f, pos, neg, opts)?,
    };
    let iterations = expansions + refined.iterations;
    if refined.zero {
        return Ok(zero_result(refined.theta, scale, iterations, opts));
    }
    let residual = match refined.residual {
        Some(r) => r,
        None => eval(f, refined.theta)?,
    };
    if residual == T::zero() {
        return Ok(zero_result(refined.theta, scale, iterations, opts));
    }
    Ok(SignChangeResult {
        theta: refined.theta,
        bracket_lo: refined.lo,
        bracket_hi: refined.hi,
        residual,
        crossing: classify(residual, scale, opts),
        iterations,
        scale,
    })
}

/// The single-observation estimator `ϑ₁(x)`.
pub fn theta1<T: Scalar, M: PsiModel<T> + ?Sized>(
    model: &M,
    x: &M::Obs,
    opts: &SolveOptions<T>,
) -> Result<SignChangeResult<T>> {
    let f = |t: T| model.psi(x, t);
    locate_with(&f, &model.theta(), opts, model.is_continuous())
}

/// `t ↦ Σ λᵢ ψ(xᵢ, t)`, summed pairwise; zero-weight terms are skipped.
pub fn weighted_psi_sum<T: Scalar, M: PsiModel<T> + ?Sized>(
    model: &M,
    sample: &WeightedSample<M::Obs, T>,
    t: T,
) -> T {
    let obs = sample.observations();
    let w = sample.weights();
    pairwise_sum(obs.len(), &|i| if w[i] == T::zero() { T::zero() } else { w[i] * model.psi(&obs[i], t) })
}

/// The weighted generalized ψ-estimator: the point of sign change of
/// `t ↦ Σ λᵢ ψ(xᵢ, t)`.
pub fn estimate<T: Scalar, M: PsiModel<T> + ?Sized>(
    model: &M,
    sample: &WeightedSample<M::Obs, T>,
    opts: &SolveOptions<T>,
) -> Result<SignChangeResult<T>> {
    let f = |t: T| weighted_psi_sum(model, sample, t);
    locate_with(&f, &model.theta(), opts, model.is_continuous())
}

/// `t ↦ −ψ(x, t)/ψ(y, t)` on the open interval between `ϑ₁(x)` and `ϑ₁(y)`.
pub struct ComparisonFunction<'a, T: Scalar, M: PsiModel<T> + ?Sized> {
    model: &'a M,
    x: &'a M::Obs,
    y: &'a M::Obs,
    lo: T,
    hi: T,
}

impl<'a, T: Scalar, M: PsiModel<T> + ?Sized> ComparisonFunction<'a, T, M> {
    /// Open domain `(lo, hi)`. The ends are the outer bracket ends of the
    /// located `ϑ₁(x)` and `ϑ₁(y)`, so `ψ(x, ·) < 0 < ψ(y, ·)` holds inside.
    pub fn domain(&self) -> (T, T) {
        (self.lo, self.hi)
    }

    pub fn eval(&self, t: T) -> Result<T> {
        if !(self.lo < t && t < self.hi) {
            return Err(Error::OutsideGridSpan { t: t.as_f64(), lo: self.lo.as_f64(), hi: self.hi.as_f64() });
        }
        let den = self.model.psi(self.y, t);
        if den.abs() <= division_guard::<T>() {
            return Err(Error::DivisionNearZero { t: t.as_f64(), value: den.as_f64() });
        }
        let v = -self.model.psi(self.x, t) / den;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteEvaluation { t: t.as_f64(), value: v.as_f64() })
        }
    }
}

/// Smallest denominator magnitude accepted by [`ComparisonFunction::eval`].
pub fn division_guard<T: Scalar>() -> T {
    T::min_positive_value().sqrt()
}

pub fn comparison_function<'a, T: Scalar, M: PsiModel<T> + ?Sized>(
    model: &'a M,
    x: &'a M::Obs,
    y: &'a M::Obs,
    opts: &SolveOptions<T>,
) -> Result<ComparisonFunction<'a, T, M>> {
    let tx = theta1(model, x, opts)?;
    let ty = theta1(model, y, opts)?;
    let (lo, hi) = (tx.bracket_hi, ty.bracket_lo);
    if !(lo < hi) {
        return Err(Error::DomainEmpty { lo: tx.theta.as_f64(), hi: ty.theta.as_f64() });
    }
    Ok(ComparisonFunction { model, x, y, lo, hi })
}
