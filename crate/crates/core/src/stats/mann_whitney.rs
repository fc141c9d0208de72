use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::{Method, StatResult};
use crate::error::{Error, Result};

/// Exact p-values are enumerated while C(n_a + n_b, n_a) stays at or below this.
pub const EXACT_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alternative {
    /// Group a tends to exceed group b.
    Greater,
    Less,
    TwoSided,
}

pub(crate) fn binomial_coefficient(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u128::MAX;
        }
    }
    acc
}

/// Doubled mid-ranks of the pooled sample (first `a.len()` entries belong to a).
fn doubled_midranks(a: &[f64], b: &[f64]) -> Vec<u64> {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&i, &j| pooled[i].total_cmp(&pooled[j]));
    let mut ranks = vec![0u64; pooled.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && pooled[order[end]] == pooled[order[start]] {
            end += 1;
        }
        for &idx in &order[start..end] {
            ranks[idx] = (start + end + 1) as u64;
        }
        start = end;
    }
    ranks
}

/// Counts size-`k` subsets of `ranks` whose doubled rank sum is ≥ and ≤
/// `observed`, walking every subset once.
fn enumerate_tails(ranks: &[u64], k: usize, observed: u64) -> (u64, u64, u64) {
    struct Walk<'a> {
        ranks: &'a [u64],
        observed: u64,
        at_least: u64,
        at_most: u64,
        total: u64,
    }
    impl Walk<'_> {
        fn go(&mut self, start: usize, left: usize, sum: u64) {
            if left == 0 {
                self.total += 1;
                if sum >= self.observed {
                    self.at_least += 1;
                }
                if sum <= self.observed {
                    self.at_most += 1;
                }
                return;
            }
            for i in start..=self.ranks.len() - left {
                self.go(i + 1, left - 1, sum + self.ranks[i]);
            }
        }
    }
    let mut walk = Walk {
        ranks,
        observed,
        at_least: 0,
        at_most: 0,
        total: 0,
    };
    walk.go(0, k, 0);
    (walk.at_least, walk.at_most, walk.total)
}

fn combine(alternative: Alternative, p_greater: f64, p_less: f64) -> f64 {
    match alternative {
        Alternative::Greater => p_greater,
        Alternative::Less => p_less,
        Alternative::TwoSided => (2.0 * p_greater.min(p_less)).min(1.0),
    }
}

/// Mann-Whitney U for group a against group b.
///
/// U counts pairs with a > b plus half the ties. The p-value is exact by
/// enumeration of all rank assignments when there are at most
/// [`EXACT_LIMIT`] of them, otherwise a tie-corrected normal approximation
/// with continuity correction.
pub fn mann_whitney_u(a: &[f64], b: &[f64], alternative: Alternative) -> Result<StatResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("Mann-Whitney U needs two non-empty groups"));
    }
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("Mann-Whitney U needs finite values".into()));
    }
    let (na, nb) = (a.len() as u64, b.len() as u64);
    let n = na + nb;
    let ranks = doubled_midranks(a, b);
    let doubled_rank_sum: u64 = ranks[..a.len()].iter().sum();
    let doubled_u = doubled_rank_sum - na * (na + 1);
    let u = doubled_u as f64 / 2.0;

    let (p_value, method) = if binomial_coefficient(n, na) <= EXACT_LIMIT as u128 {
        let (at_least, at_most, total) = enumerate_tails(&ranks, a.len(), doubled_rank_sum);
        let p = combine(
            alternative,
            at_least as f64 / total as f64,
            at_most as f64 / total as f64,
        );
        (p, Method::Exact)
    } else {
        let (naf, nbf, nf) = (na as f64, nb as f64, n as f64);
        let mut sorted = ranks.clone();
        sorted.sort_unstable();
        let tie_term: f64 = sorted
            .chunk_by(|x, y| x == y)
            .map(|g| {
                let t = g.len() as f64;
                t * t * t - t
            })
            .sum();
        let mu = naf * nbf / 2.0;
        let var = naf * nbf / 12.0 * ((nf + 1.0) - tie_term / (nf * (nf - 1.0)));
        let (p_greater, p_less) = if var <= 0.0 {
            (1.0, 1.0)
        } else {
            let sd = var.sqrt();
            let normal = Normal::standard();
            (
                normal.sf((u - mu - 0.5) / sd).min(1.0),
                normal.cdf((u - mu + 0.5) / sd).min(1.0),
            )
        };
        (combine(alternative, p_greater, p_less), Method::NormalApproximation)
    };

    Ok(StatResult {
        name: "mann-whitney-u".into(),
        statistic: u,
        p_value: Some(p_value),
        effect_size: Some(u / (na as f64 * nb as f64)),
        method,
        n_per_group: vec![a.len(), b.len()],
        seed: None,
    })
}
