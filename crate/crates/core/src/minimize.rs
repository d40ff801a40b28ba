//! Bracketed golden-section minimization of unimodal objectives.

use crate::error::{Error, Result};
use crate::interval::ParamInterval;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions<T> {
    /// Final bracket width, relative: width ≤ `tolerance · (1 + |t|)`.
    pub tolerance: T,
    pub max_iterations: usize,
    pub max_expansions: usize,
    pub initial_probe: Option<T>,
}

impl<T: Scalar> Default for MinimizeOptions<T> {
    fn default() -> Self {
        MinimizeOptions { tolerance: T::lit(1e-7), max_iterations: 500, max_expansions: 200, initial_probe: None }
    }
}

impl<T: Scalar> MinimizeOptions<T> {
    pub fn with_probe(mut self, probe: T) -> Self {
        self.initial_probe = Some(probe);
        self
    }

    pub fn with_tolerance(mut self, tolerance: T) -> Self {
        self.tolerance = tolerance;
        self
    }
}

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

fn checked<T: Scalar>(f: &impl Fn(T) -> Result<T>, t: T) -> Result<T> {
    let v = f(t)?;
    if v.is_nan() {
        return Err(Error::NonFiniteEvaluation { t: t.as_f64(), value: v.as_f64() });
    }
    Ok(v)
}

/// Finds `a < b < c` with `f(b) < f(a)` and `f(b) <= f(c)`.
fn bracket<T: Scalar>(
    f: &impl Fn(T) -> Result<T>,
    theta: &ParamInterval<T>,
    opts: &MinimizeOptions<T>,
) -> Result<(T, T)> {
    let p = opts.initial_probe.unwrap_or_else(|| theta.default_probe());
    if !theta.contains(p) {
        return Err(Error::InvalidConfig(format!("initial probe {p} outside the search interval")));
    }
    let step0 = T::one().max(p.abs()) * T::lit(0.01);
    let fp = checked(f, p)?;
    let not_found = |a: T, c: T| Error::BracketNotFound {
        left: a.as_f64(),
        right: c.as_f64(),
        expansions: opts.max_expansions,
    };

    let r = probe_toward(p, theta.hi(), step0, 0);
    if !theta.contains(r) {
        return Err(not_found(p, r));
    }
    let fr = checked(f, r)?;
    if fr < fp {
        let (mut a, mut b, mut fb) = (p, r, fr);
        for k in 1..opts.max_expansions {
            let c = probe_toward(p, theta.hi(), step0, k);
            if !theta.contains(c) || c <= b {
                return Err(not_found(a, b));
            }
            let fc = checked(f, c)?;
            if fc >= fb {
                return Ok((a, c));
            }
            a = b;
            b = c;
            fb = fc;
        }
        Err(not_found(a, b))
    } else {
        let (mut b, mut c, mut fb) = (p, r, fp);
        for k in 0..opts.max_expansions {
            let a = probe_toward(p, theta.lo(), step0, k);
            if !theta.contains(a) || a >= b {
                return Err(not_found(b, c));
            }
            let fa = checked(f, a)?;
            if fa > fb {
                return Ok((a, c));
            }
            c = b;
            b = a;
            fb = fa;
        }
        Err(not_found(b, c))
    }
}

/// Minimizer of a function that strictly decreases and then strictly
/// increases on `theta`: bracket expansion followed by golden-section search.
pub fn argmin_objective<T: Scalar>(
    f: impl Fn(T) -> Result<T>,
    theta: &ParamInterval<T>,
    opts: &MinimizeOptions<T>,
) -> Result<T> {
    let (mut a, mut c) = bracket(&f, theta, opts)?;
    let inv_phi = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut x1 = c - inv_phi * (c - a);
    let mut x2 = a + inv_phi * (c - a);
    let mut f1 = checked(&f, x1)?;
    let mut f2 = checked(&f, x2)?;
    for _ in 0..opts.max_iterations {
        let m = a + (c - a) / T::lit(2.0);
        if c - a <= opts.tolerance * (T::one() + m.abs()) {
            return Ok(if f1 <= f2 { x1 } else { x2 });
        }
        if f1 <= f2 {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - inv_phi * (c - a);
            f1 = checked(&f, x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (c - a);
            f2 = checked(&f, x2)?;
        }
    }
    Err(Error::MaxIterations { iterations: opts.max_iterations, width: (c - a).as_f64() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_vertex() {
        let th = ParamInterval::new(0.0, 10.0).unwrap();
        let t = argmin_objective(|t: f64| Ok((t - 3.0).powi(2)), &th, &MinimizeOptions::default()).unwrap();
        assert!((t - 3.0).abs() <= 1e-7 * 4.0);
    }

    #[test]
    fn minimum_left_of_probe() {
        let th = ParamInterval::<f64>::positive();
        let t = argmin_objective(|t: f64| Ok(t - 0.02 * t.ln()), &th, &MinimizeOptions::default()).unwrap();
        assert!((t - 0.02).abs() <= 1e-7 * 1.02);
    }

    #[test]
    fn minimum_far_right_on_real_line() {
        let th = ParamInterval::<f64>::real_line();
        let t = argmin_objective(|t: f64| Ok((t - 1e4).abs()), &th, &MinimizeOptions::default()).unwrap();
        assert!((t - 1e4).abs() <= 1e-7 * 1e4 * 1.01);
    }

    #[test]
    fn monotone_has_no_bracket() {
        let th = ParamInterval::new(0.0, 1.0).unwrap();
        let err = argmin_objective(|t: f64| Ok(-t), &th, &MinimizeOptions::default()).unwrap_err();
        assert!(matches!(err, Error::BracketNotFound { .. }));
    }

    #[test]
    fn dense_scan_agrees() {
        let th = ParamInterval::new(0.01, 20.0).unwrap();
        // negative log-likelihood of the normal variance with (x - m)^2 = 1 twice
        let nll = |t: f64| Ok(t.ln() + 1.0 / t);
        let t = argmin_objective(nll, &th, &MinimizeOptions::default()).unwrap();
        let scan = (1..200_000)
            .map(|i| 0.01 + i as f64 * (20.0 - 0.01) / 200_000.0)
            .min_by(|a, b| nll(*a).unwrap().partial_cmp(&nll(*b).unwrap()).unwrap())
            .unwrap();
        assert!((t - scan).abs() <= 1e-4);
        assert!((t - 1.0).abs() <= 2e-7);
    }
}
