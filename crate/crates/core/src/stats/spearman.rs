use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{average_ranks, mean, Method, StatResult};
use crate::error::{Error, Result};

/// Spearman's ρ: Pearson correlation of average ranks. Two-sided p from
/// t = ρ·√((n−2)/(1−ρ²)) on n − 2 degrees of freedom.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<StatResult> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "Spearman needs equal lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::InvalidArgument("Spearman needs at least 3 pairs".into()));
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let (mx, my) = (mean(&rx), mean(&ry));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Undefined("Spearman correlation of a constant input".into()));
    }
    let rho = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let df = (x.len() - 2) as f64;
    let p = if rho.abs() >= 1.0 {
        0.0
    } else {
        let t = rho * (df / (1.0 - rho * rho)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("positive df");
        (2.0 * dist.sf(t.abs())).min(1.0)
    };
    Ok(StatResult {
        name: "spearman-rho".into(),
        statistic: rho,
        p_value: Some(p),
        effect_size: Some(rho),
        method: Method::TApproximation,
        n_per_group: vec![x.len()],
        seed: None,
    })
}
