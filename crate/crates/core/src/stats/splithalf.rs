//! Split-half cross-validation of the screen against the criterion: screen
//! on one random half of the items, measure AUROC on the other half.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use super::bootstrap::{median, percentile_of};
use super::effect::cohens_d;
use crate::config::ScreenConfig;
use crate::data::{ItemRecord, ModelDataset};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, substream};
use crate::screen::{screen_tier, Interval, TierValue};
use crate::selective::type2_auroc;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitHalfResult {
    pub per_split_d: Vec<f64>,
    pub median_d: f64,
    pub d_ci: Interval,
    pub p_d_positive: f64,
    pub n_splits_requested: usize,
    pub n_splits_retained: usize,
}

/// Tier on the screening half and AUROC on the held-out half, per model.
fn split_outcomes(
    datasets: &[ModelDataset],
    screen_half: &HashSet<&str>,
    config: &ScreenConfig,
) -> Vec<(TierValue, f64)> {
    datasets
        .iter()
        .filter_map(|ds| {
            let (screen, held_out): (Vec<&ItemRecord>, Vec<&ItemRecord>) = ds
                .items()
                .iter()
                .partition(|item| screen_half.contains(item.item_id.as_str()));
            let tier = screen_tier(screen, config).ok()?;
            Some((tier, type2_auroc(held_out)?))
        })
        .collect()
}

fn split_d(outcomes: &[(TierValue, f64)]) -> Option<f64> {
    let pick = |want: TierValue| -> Vec<f64> {
        outcomes
            .iter()
            .filter(|(tier, _)| *tier == want)
            .map(|&(_, auroc)| auroc)
            .collect()
    };
    let valid = pick(TierValue::Valid);
    let invalid = pick(TierValue::Invalid);
    if valid.len() < 2 || invalid.len() < 2 {
        return None;
    }
    cohens_d(&valid, &invalid).ok()
}

/// Runs `n_splits` random 50/50 partitions of the shared item ids.
///
/// Split `i` shuffles with stream `i` of `seed` and screens with a seed
/// derived from `(config.seed, i)`, so output is independent of thread
/// count. Splits with fewer than two Valid or two Invalid models (or an
/// undefined d) are dropped and show up in `n_splits_retained`.
pub fn split_half_cv(
    datasets: &[ModelDataset],
    config: &ScreenConfig,
    n_splits: usize,
    seed: u64,
) -> Result<SplitHalfResult> {
    if datasets.len() < 2 {
        return Err(Error::InvalidArgument("split-half needs at least two models".into()));
    }
    if n_splits == 0 {
        return Err(Error::InvalidArgument("split-half needs at least one split".into()));
    }
    let ids: BTreeSet<&str> = datasets[0].items().iter().map(|i| i.item_id.as_str()).collect();
    for ds in &datasets[1..] {
        let other: BTreeSet<&str> = ds.items().iter().map(|i| i.item_id.as_str()).collect();
        if other != ids {
            return Err(Error::InvalidArgument(format!(
                "model `{}` does not share the item ids of `{}`",
                ds.model_id(),
                datasets[0].model_id()
            )));
        }
    }
    let ids: Vec<&str> = ids.into_iter().collect();
    let half = ids.len() / 2;

    let per_split: Vec<Option<f64>> = (0..n_splits as u64)
        .into_par_iter()
        .map(|i| {
            let mut order = ids.clone();
            order.shuffle(&mut substream(seed, i));
            let screen_half: HashSet<&str> = order[..half].iter().copied().collect();
            let split_config = config.with_seed(derive_seed(config.seed, i));
            split_d(&split_outcomes(datasets, &screen_half, &split_config))
        })
        .collect();

    let per_split_d: Vec<f64> = per_split.into_iter().flatten().collect();
    if per_split_d.is_empty() {
        return Err(Error::NoRetainedSplits { requested: n_splits });
    }
    let positive = per_split_d.iter().filter(|&&d| d > 0.0).count();
    Ok(SplitHalfResult {
        median_d: median(&per_split_d),
        d_ci: Interval {
            lower: percentile_of(&per_split_d, 2.5),
            upper: percentile_of(&per_split_d, 97.5),
        },
        p_d_positive: positive as f64 / per_split_d.len() as f64,
        n_splits_requested: n_splits,
        n_splits_retained: per_split_d.len(),
        per_split_d,
    })
}
