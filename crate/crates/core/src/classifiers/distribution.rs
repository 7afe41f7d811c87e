use serde::{Deserialize, Serialize};

/// A predictive distribution over class values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassDistribution(Vec<f64>);

impl ClassDistribution {
    /// Normalizes nonnegative weights. All-zero input gives the uniform
    /// distribution.
    pub fn from_weights(mut w: Vec<f64>) -> Self {
        debug_assert!(w.iter().all(|&v| v >= 0.0 && v.is_finite()));
        let sum: f64 = w.iter().sum();
        if sum > 0.0 {
            w.iter_mut().for_each(|v| *v /= sum);
        } else {
            let u = 1.0 / w.len() as f64;
            w.iter_mut().for_each(|v| *v = u);
        }
        ClassDistribution(w)
    }

    /// Normalizes unnormalized log-probabilities (softmax).
    pub fn from_log_weights(log_w: &[f64]) -> Self {
        let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Self::from_weights(vec![0.0; log_w.len()]);
        }
        Self::from_weights(log_w.iter().map(|v| (v - max).exp()).collect())
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn prob(&self, k: u32) -> f64 {
        self.0[k as usize]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Most probable class; ties go to the smallest index.
    pub fn argmax(&self) -> u32 {
        let mut best = 0;
        for (k, &p) in self.0.iter().enumerate() {
            if p > self.0[best] {
                best = k;
            }
        }
        best as u32
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes() {
        let d = ClassDistribution::from_weights(vec![1.0, 3.0]);
        assert_eq!(d.probs(), &[0.25, 0.75]);
        let u = ClassDistribution::from_weights(vec![0.0, 0.0, 0.0]);
        assert_eq!(u.probs(), &[1.0 / 3.0; 3]);
        let l = ClassDistribution::from_log_weights(&[-1000.0, -1000.0 + 3f64.ln()]);
        assert!((l.prob(1) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn argmax_ties_low() {
        assert_eq!(ClassDistribution::from_weights(vec![1.0, 1.0]).argmax(), 0);
        assert_eq!(ClassDistribution::from_weights(vec![1.0, 2.0, 2.0]).argmax(), 1);
    }
}
