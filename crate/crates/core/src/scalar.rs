//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating point type usable as a parameter value: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` literal, panicking only for types that cannot
    /// represent ordinary constants.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("scalar type cannot represent constant")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// Pairwise (cascade) summation of `n` terms produced by `term`.
///
/// The reduction tree depends only on `n`, so results are identical
/// whichever order the caller computed the terms in.
pub fn pairwise_sum<T: Scalar>(n: usize, term: &impl Fn(usize) -> T) -> T {
    fn go<T: Scalar>(lo: usize, hi: usize, term: &impl Fn(usize) -> T) -> T {
        let len = hi - lo;
        if len <= 8 {
            let mut acc = T::zero();
            for i in lo..hi {
                acc = acc + term(i);
            }
            acc
        } else {
            let mid = lo + len / 2;
            go(lo, mid, term) + go(mid, hi, term)
        }
    }
    go(0, n, term)
}

/// Pairwise sum of a slice.
pub fn pairwise_sum_slice<T: Scalar>(values: &[T]) -> T {
    pairwise_sum(values.len(), &|i| values[i])
}
