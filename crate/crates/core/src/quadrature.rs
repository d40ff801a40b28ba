//! Composite trapezoid, fixed Gauss–Legendre and adaptive Simpson rules.

use crate::error::Result;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Sub-cells per working-grid cell for the trapezoid rule behind `log p`.
    pub refinement: usize,
}

impl QuadratureOptions {
    pub fn with_refinement(refinement: usize) -> Self {
        QuadratureOptions { refinement: refinement.max(1) }
    }
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self::with_refinement(32)
    }
}

const GL4_NODES: [f64; 2] = [0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
const GL4_WEIGHTS: [f64; 2] = [0.652_145_154_862_546_1, 0.347_854_845_137_453_9];

/// Four-point Gauss–Legendre rule on `[a, b]` (signed: `b < a` allowed).
pub fn gauss_legendre4<T: Scalar>(f: &impl Fn(T) -> T, a: T, b: T) -> T {
    let half = T::lit(0.5);
    let c = half * (a + b);
    let r = half * (b - a);
    let mut acc = T::zero();
    for k in 0..2 {
        let x = r * T::lit(GL4_NODES[k]);
        acc = acc + T::lit(GL4_WEIGHTS[k]) * (f(c - x) + f(c + x));
    }
    acc * r
}

/// Running trapezoid integral `∫_{nodes[0]}^{nodes[i]}` of tabulated values.
pub fn trapezoid_cumulative<T: Scalar>(nodes: &[T], values: &[T]) -> Vec<T> {
    assert_eq!(nodes.len(), values.len());
    let half = T::lit(0.5);
    let mut out = Vec::with_capacity(nodes.len());
    let mut acc = T::zero();
    out.push(acc);
    for i in 1..nodes.len() {
        acc = acc + half * (nodes[i] - nodes[i - 1]) * (values[i] + values[i - 1]);
        out.push(acc);
    }
    out
}

/// Signed adaptive Simpson integral of `f` from `a` to `b`.
pub fn adaptive_simpson<T: Scalar>(
    f: &impl Fn(T) -> Result<T>,
    a: T,
    b: T,
    tolerance: T,
    max_depth: usize,
) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    if b < a {
        return adaptive_simpson(f, b, a, tolerance, max_depth).map(|v| -v);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = mid(a, b);
    let fm = f(m)?;
    let whole = simpson(a, b, fa, fm, fb);
    let eps = tolerance * T::one().max(whole.abs());
    recurse(f, a, b, fa, fm, fb, whole, eps, max_depth)
}

fn mid<T: Scalar>(a: T, b: T) -> T {
    a + (b - a) / T::lit(2.0)
}

fn simpson<T: Scalar>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<T: Scalar>(
    f: &impl Fn(T) -> Result<T>,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    eps: T,
    depth: usize,
) -> Result<T> {
    let m = mid(a, b);
    let (lm, rm) = (mid(a, m), mid(m, b));
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    let fifteen = T::lit(15.0);
    if depth == 0 || delta.abs() <= fifteen * eps || !(lm > a && rm < b) {
        return Ok(left + right + delta / fifteen);
    }
    let half = eps / T::lit(2.0);
    Ok(recurse(f, a, m, fa, flm, fm, left, half, depth - 1)? + recurse(f, m, b, fm, frm, fb, right, half, depth - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_exact_for_linear() {
        let nodes = [0.0, 0.5, 2.0, 3.0];
        let vals: Vec<f64> = nodes.iter().map(|t| 2.0 * t + 1.0).collect();
        let c = trapezoid_cumulative(&nodes, &vals);
        for (t, v) in nodes.iter().zip(&c) {
            assert!((v - (t * t + t)).abs() < 1e-14);
        }
    }

    #[test]
    fn simpson_on_smooth_integrands() {
        let v = adaptive_simpson(&|t: f64| Ok(t.sin()), 0.0, std::f64::consts::PI, 1e-12, 50).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
        let v = adaptive_simpson(&|t: f64| Ok(1.0 / t), 2.0, 1.0, 1e-12, 50).unwrap();
        assert!((v + std::f64::consts::LN_2).abs() < 1e-11);
        assert_eq!(adaptive_simpson(&|t: f64| Ok(t), 1.0, 1.0, 1e-12, 50).unwrap(), 0.0);
    }

    #[test]
    fn simpson_with_kink() {
        let v = adaptive_simpson(&|t: f64| Ok((t - 0.3).abs()), 0.0, 1.0, 1e-12, 50).unwrap();
        let exact = 0.3 * 0.3 / 2.0 + 0.7 * 0.7 / 2.0;
        assert!((v - exact).abs() < 1e-10);
    }
}
