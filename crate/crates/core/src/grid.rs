use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Strictly increasing list of parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    points: Vec<T>,
}

impl<T: Scalar> Grid<T> {
    pub fn new(points: Vec<T>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {}", points.len())));
        }
        if points.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid("non-finite grid point".into()));
        }
        if let Some(w) = points.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidGrid(format!(
                "grid not strictly increasing at {} >= {}",
                w[0], w[1]
            )));
        }
        Ok(Grid { points })
    }

    /// `n` equally spaced points from `lo` to `hi` inclusive.
    pub fn uniform(lo: T, hi: T, n: usize) -> Result<Self> {
        if n < 2 || !(lo < hi) {
            return Err(Error::InvalidGrid(format!("uniform grid needs lo < hi and n >= 2 (lo={lo}, hi={hi}, n={n})")));
        }
        let step = (hi - lo) / T::lit((n - 1) as f64);
        let mut points: Vec<T> = (0..n).map(|i| lo + step * T::lit(i as f64)).collect();
        points[n - 1] = hi;
        Self::new(points)
    }

    /// `n` geometrically spaced points from `lo` to `hi`, both positive.
    pub fn geometric(lo: T, hi: T, n: usize) -> Result<Self> {
        if !(lo > T::zero()) {
            return Err(Error::InvalidGrid(format!("geometric grid needs lo > 0, got {lo}")));
        }
        let g = Self::uniform(lo.ln(), hi.ln(), n)?;
        let mut points: Vec<T> = g.points.into_iter().map(T::exp).collect();
        points[0] = lo;
        points[n - 1] = hi;
        Self::new(points)
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lo(&self) -> T {
        self.points[0]
    }

    pub fn hi(&self) -> T {
        self.points[self.points.len() - 1]
    }

    pub fn midpoint(&self) -> T {
        (self.lo() + self.hi()) / T::lit(2.0)
    }

    pub fn contains(&self, t: T) -> bool {
        self.lo() <= t && t <= self.hi()
    }

    /// Index `i` of the cell `[t_i, t_{i+1}]` containing `t` (clamped to the span).
    pub fn cell(&self, t: T) -> usize {
        let n = self.points.len();
        let idx = self.points.partition_point(|&p| p <= t);
        idx.saturating_sub(1).min(n - 2)
    }

    /// Subdivides every cell into `parts` equal pieces.
    pub fn refined(&self, parts: usize) -> Self {
        let parts = parts.max(1);
        let mut points = Vec::with_capacity((self.points.len() - 1) * parts + 1);
        for w in self.points.windows(2) {
            let h = (w[1] - w[0]) / T::lit(parts as f64);
            points.push(w[0]);
            for k in 1..parts {
                let t = w[0] + h * T::lit(k as f64);
                if t > *points.last().unwrap() && t < w[1] {
                    points.push(t);
                }
            }
        }
        points.push(self.hi());
        Grid { points }
    }

    /// Checks that `t` lies in the closed span, for `OutsideGridSpan` reporting.
    pub fn require(&self, t: T) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::OutsideGridSpan { t: t.as_f64(), lo: self.lo().as_f64(), hi: self.hi().as_f64() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_hits_endpoints() {
        let g = Grid::<f64>::uniform(0.25, 4.0, 512).unwrap();
        assert_eq!(g.len(), 512);
        assert_eq!(g.lo(), 0.25);
        assert_eq!(g.hi(), 4.0);
    }

    #[test]
    fn rejects_non_increasing() {
        assert!(Grid::new(vec![0.0, 1.0, 1.0]).is_err());
        assert!(Grid::new(vec![0.0]).is_err());
        assert!(Grid::<f64>::uniform(1.0, 0.0, 4).is_err());
    }

    #[test]
    fn cell_lookup() {
        let g = Grid::new(vec![0.0, 1.0, 2.0, 4.0]).unwrap();
        assert_eq!(g.cell(0.0), 0);
        assert_eq!(g.cell(0.5), 0);
        assert_eq!(g.cell(1.0), 1);
        assert_eq!(g.cell(3.9), 2);
        assert_eq!(g.cell(4.0), 2);
    }

    #[test]
    fn refinement_keeps_original_points() {
        let g = Grid::new(vec![0.0, 1.0, 3.0]).unwrap();
        let r = g.refined(4);
        assert_eq!(r.len(), 9);
        assert_eq!(r.points()[4], 1.0);
        assert_eq!(r.points()[6], 2.0);
        assert!(Grid::new(r.points().to_vec()).is_ok());
    }

    #[test]
    fn geometric_is_increasing() {
        let g = Grid::<f64>::geometric(1e-3, 10.0, 50).unwrap();
        assert_eq!(g.lo(), 1e-3);
        assert_eq!(g.hi(), 10.0);
    }
}
