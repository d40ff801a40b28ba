use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Observations with nonnegative weights, not all zero.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSample<O, T> {
    observations: Vec<O>,
    weights: Vec<T>,
}

impl<O, T: Scalar> WeightedSample<O, T> {
    pub fn new(observations: Vec<O>, weights: Vec<T>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::InvalidWeights("sample is empty".into()));
        }
        if observations.len() != weights.len() {
            return Err(Error::InvalidWeights(format!(
                "{} observations but {} weights",
                observations.len(),
                weights.len()
            )));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w >= T::zero())) {
            return Err(Error::InvalidWeights(format!("weight {i} is {w}, expected finite and >= 0")));
        }
        if weights.iter().all(|w| *w == T::zero()) {
            return Err(Error::InvalidWeights("all weights are zero".into()));
        }
        Ok(WeightedSample { observations, weights })
    }

    /// Every observation with weight one.
    pub fn uniform(observations: Vec<O>) -> Result<Self> {
        let weights = vec![T::one(); observations.len()];
        Self::new(observations, weights)
    }

    pub fn observations(&self) -> &[O] {
        &self.observations
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn total_weight(&self) -> T {
        crate::scalar::pairwise_sum_slice(&self.weights)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&O, T)> {
        self.observations.iter().zip(self.weights.iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_weights() {
        assert!(WeightedSample::<f64, f64>::new(vec![], vec![]).is_err());
        assert!(WeightedSample::new(vec![1.0], vec![0.0]).is_err());
        assert!(WeightedSample::new(vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(WeightedSample::new(vec![1.0], vec![-1.0]).is_err());
        assert!(WeightedSample::new(vec![1.0], vec![f64::NAN]).is_err());
        let s = WeightedSample::new(vec![1.0, 2.0], vec![0.0, 3.0]).unwrap();
        assert_eq!(s.total_weight(), 3.0);
    }
}
