use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Open parameter interval `(lo, hi)`; either endpoint may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamInterval<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> ParamInterval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || !(lo < hi) || lo == T::infinity() || hi == T::neg_infinity() {
            return Err(Error::InvalidInterval { lo: lo.as_f64(), hi: hi.as_f64() });
        }
        Ok(ParamInterval { lo, hi })
    }

    /// The whole real line.
    pub fn real_line() -> Self {
        ParamInterval { lo: T::neg_infinity(), hi: T::infinity() }
    }

    /// `(0, ∞)`.
    pub fn positive() -> Self {
        ParamInterval { lo: T::zero(), hi: T::infinity() }
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    /// Strict membership test.
    pub fn contains(&self, t: T) -> bool {
        self.lo < t && t < self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Whether `[a, b]` lies inside the open interval.
    pub fn contains_closed(&self, a: T, b: T) -> bool {
        a <= b && self.contains(a) && self.contains(b)
    }

    /// A point well inside the interval used as the default starting probe.
    pub fn default_probe(&self) -> T {
        let one = T::one();
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => self.lo + (self.hi - self.lo) / T::lit(2.0),
            (true, false) => self.lo + one.max(self.lo.abs()),
            (false, true) => self.hi - one.max(self.hi.abs()),
            (false, false) => T::zero(),
        }
    }

    /// Intersection with another open interval.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        Self::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_is_strict() {
        let th = ParamInterval::new(0.0, 2.0).unwrap();
        assert!(th.contains(1.0));
        assert!(!th.contains(0.0));
        assert!(!th.contains(2.0));
        let pos = ParamInterval::<f64>::positive();
        assert!(!pos.contains(0.0));
        assert!(pos.contains(1e300));
    }

    #[test]
    fn degenerate_intervals_rejected() {
        assert!(ParamInterval::new(1.0, 1.0).is_err());
        assert!(ParamInterval::new(2.0, 1.0).is_err());
        assert!(ParamInterval::new(f64::NAN, 1.0).is_err());
        assert!(ParamInterval::new(f64::INFINITY, f64::INFINITY).is_err());
        assert!(ParamInterval::new(f64::NEG_INFINITY, f64::INFINITY).is_ok());
    }

    #[test]
    fn default_probe_is_inside() {
        for th in [
            ParamInterval::new(0.0, 2.0).unwrap(),
            ParamInterval::positive(),
            ParamInterval::new(f64::NEG_INFINITY, -5.0).unwrap(),
            ParamInterval::real_line(),
        ] {
            assert!(th.contains(th.default_probe()), "{th:?}");
        }
    }
}
