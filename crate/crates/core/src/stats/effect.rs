use super::{mean, sample_variance};
use crate::error::{Error, Result};

/// Cohen's d with pooled SD:
/// `(mean_a − mean_b) / s_pooled`,
/// `s_pooled² = ((n_a−1)s_a² + (n_b−1)s_b²) / (n_a + n_b − 2)`.
pub fn cohens_d(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InvalidArgument(
            "Cohen's d needs at least two observations per group".into(),
        ));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let pooled = ((na - 1.0) * sample_variance(a) + (nb - 1.0) * sample_variance(b)) / (na + nb - 2.0);
    if pooled <= 0.0 {
        return Err(Error::Undefined("Cohen's d with zero pooled variance".into()));
    }
    Ok((mean(a) - mean(b)) / pooled.sqrt())
}
