//! Model-level bootstrap over tier groupings.

use std::collections::BTreeMap;

use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use super::mean;
use crate::error::{Error, Result};
use crate::rng::{substream, Rng};
use crate::screen::TierValue;

pub const MIN_RESAMPLES: usize = 1_000;

/// Linear-interpolation percentile (`q` in [0, 100]) of sorted data.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of empty data");
    let rank = q / 100.0 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (rank - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// Sorted copy, then percentile.
pub fn percentile_of(values: &[f64], q: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    percentile(&sorted, q)
}

pub fn median(values: &[f64]) -> f64 {
    percentile_of(values, 50.0)
}

fn resample_mean(values: &[f64], rng: &mut Rng) -> f64 {
    let n = values.len();
    let sum: f64 = (0..n).map(|_| values[rng.random_range(0..n)]).sum();
    sum / n as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TierMean {
    pub n: usize,
    pub mean: f64,
    pub lower: f64,
    pub upper: f64,
    pub resamples: usize,
    pub seed: u64,
}

fn tier_stream(tier: TierValue) -> u64 {
    match tier {
        TierValue::Invalid => 0,
        TierValue::Indeterminate => 1,
        TierValue::Valid => 2,
    }
}

fn check_resamples(b: usize) -> Result<()> {
    if b < MIN_RESAMPLES {
        return Err(Error::InvalidArgument(format!(
            "bootstrap needs at least {MIN_RESAMPLES} resamples, got {b}"
        )));
    }
    Ok(())
}

/// Percentile 95% interval on each tier's mean, resampling models with
/// replacement. Each tier draws from its own stream, so a tier's interval
/// does not depend on which other tiers are present.
pub fn bootstrap_tier_means(
    tier_values: &BTreeMap<TierValue, Vec<f64>>,
    b: usize,
    seed: u64,
) -> Result<BTreeMap<TierValue, TierMean>> {
    check_resamples(b)?;
    tier_values
        .iter()
        .map(|(&tier, values)| {
            if values.is_empty() {
                return Err(Error::Empty("bootstrap tier has no models"));
            }
            let mut rng = substream(seed, tier_stream(tier));
            let mut means: Vec<f64> = (0..b).map(|_| resample_mean(values, &mut rng)).collect();
            means.sort_by(f64::total_cmp);
            Ok((
                tier,
                TierMean {
                    n: values.len(),
                    mean: mean(values),
                    lower: percentile(&means, 2.5),
                    upper: percentile(&means, 97.5),
                    resamples: b,
                    seed,
                },
            ))
        })
        .collect()
}

/// Share of joint resamples with mean(Invalid) < mean(Indeterminate) < mean(Valid).
/// Resample `i` draws all three tiers from stream `i`.
pub fn monotonicity_probability(tier_values: &BTreeMap<TierValue, Vec<f64>>, b: usize, seed: u64) -> Result<f64> {
    check_resamples(b)?;
    let get = |tier: TierValue| -> Result<&Vec<f64>> {
        tier_values
            .get(&tier)
            .filter(|v| !v.is_empty())
            .ok_or_else(|| Error::InvalidArgument(format!("monotonicity needs a non-empty {tier} tier")))
    };
    let invalid = get(TierValue::Invalid)?;
    let indeterminate = get(TierValue::Indeterminate)?;
    let valid = get(TierValue::Valid)?;
    let hits: usize = (0..b as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i);
            let lo = resample_mean(invalid, &mut rng);
            let mid = resample_mean(indeterminate, &mut rng);
            let hi = resample_mean(valid, &mut rng);
            usize::from(lo < mid && mid < hi)
        })
        .sum();
    Ok(hits as f64 / b as f64)
}
