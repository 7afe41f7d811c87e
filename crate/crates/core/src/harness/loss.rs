use crate::classifiers::ClassDistribution;

use super::HarnessError;

fn check(predictions: &[ClassDistribution], truth: &[u32]) -> Result<(), HarnessError> {
    if predictions.len() != truth.len() {
        return Err(HarnessError::LengthMismatch {
            predictions: predictions.len(),
            truth: truth.len(),
        });
    }
    if truth.is_empty() {
        return Err(HarnessError::NoPredictions);
    }
    Ok(())
}

/// Fraction of rows whose argmax (ties to the lowest class) misses the truth.
pub fn zero_one_loss(predictions: &[ClassDistribution], truth: &[u32]) -> Result<f64, HarnessError> {
    check(predictions, truth)?;
    let wrong = predictions.iter().zip(truth).filter(|(p, &y)| p.argmax() != y).count();
    Ok(wrong as f64 / truth.len() as f64)
}

/// Mean of `-ln p(true class)`.
pub fn log_loss(predictions: &[ClassDistribution], truth: &[u32]) -> Result<f64, HarnessError> {
    check(predictions, truth)?;
    let mut sum = 0.0;
    for (row, (p, &y)) in predictions.iter().zip(truth).enumerate() {
        let py = p.prob(y);
        if py <= 0.0 {
            return Err(HarnessError::ZeroProbability { row });
        }
        sum -= py.ln();
    }
    Ok(sum / truth.len() as f64)
}
