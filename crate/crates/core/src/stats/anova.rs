use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use super::{mean, Method, StatResult};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumsOfSquares {
    pub between: f64,
    pub within: f64,
    pub total: f64,
}

pub fn sums_of_squares(groups: &[&[f64]]) -> SumsOfSquares {
    let all: Vec<f64> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    let grand = mean(&all);
    let between = groups.iter().map(|g| g.len() as f64 * (mean(g) - grand).powi(2)).sum();
    let within = groups
        .iter()
        .map(|g| {
            let m = mean(g);
            g.iter().map(|x| (x - m).powi(2)).sum::<f64>()
        })
        .sum();
    let total = all.iter().map(|x| (x - grand).powi(2)).sum();
    SumsOfSquares { between, within, total }
}

/// One-way ANOVA. `statistic` is F with (k − 1, n − k) degrees of freedom and
/// `effect_size` is η² = SS_between / SS_total (absent when SS_total = 0).
pub fn one_way_anova(groups: &[&[f64]]) -> Result<StatResult> {
    let k = groups.len();
    if k < 2 {
        return Err(Error::InvalidArgument("ANOVA needs at least two groups".into()));
    }
    if groups.iter().any(|g| g.is_empty()) {
        return Err(Error::Empty("ANOVA groups must be non-empty"));
    }
    let n: usize = groups.iter().map(|g| g.len()).sum();
    if n <= k {
        return Err(Error::InvalidArgument(format!(
            "ANOVA needs more observations ({n}) than groups ({k})"
        )));
    }
    let ss = sums_of_squares(groups);
    let df_between = (k - 1) as f64;
    let df_within = (n - k) as f64;

    let (f, p) = if ss.between <= 0.0 {
        (0.0, 1.0)
    } else if ss.within <= 0.0 {
        (f64::INFINITY, 0.0)
    } else {
        let f = (ss.between / df_between) / (ss.within / df_within);
        let dist = FisherSnedecor::new(df_between, df_within).expect("positive degrees of freedom");
        (f, dist.sf(f))
    };

    Ok(StatResult {
        name: "one-way-anova".into(),
        statistic: f,
        p_value: Some(p),
        effect_size: (ss.total > 0.0).then(|| (ss.between / ss.total).clamp(0.0, 1.0)),
        method: Method::FDistribution,
        n_per_group: groups.iter().map(|g| g.len()).collect(),
        seed: None,
    })
}
