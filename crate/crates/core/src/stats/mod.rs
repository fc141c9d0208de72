//! Inferential battery used for criterion validation.

pub mod anova;
pub mod bootstrap;
pub mod effect;
pub mod mann_whitney;
pub mod spearman;
pub mod splithalf;

use serde::{Deserialize, Serialize};

pub use anova::one_way_anova;
pub use bootstrap::{bootstrap_tier_means, monotonicity_probability, TierMean};
pub use effect::cohens_d;
pub use mann_whitney::{mann_whitney_u, Alternative};
pub use spearman::spearman_rho;
pub use splithalf::{split_half_cv, SplitHalfResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    NormalApproximation,
    Bootstrap,
    FDistribution,
    TApproximation,
}

/// A named test outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatResult {
    pub name: String,
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub effect_size: Option<f64>,
    pub method: Method,
    pub n_per_group: Vec<usize>,
    pub seed: Option<u64>,
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance (n − 1 denominator).
pub(crate) fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Average ranks (1-based) with ties sharing their mean rank.
pub(crate) fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]));
    let mut ranks = vec![0.0; xs.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && xs[order[end]] == xs[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}
