//! Split-half cross-validation on a synthetic cohort: ten discriminating
//! models and two inverted ones, 524 shared items each.
//!
//!     cargo run --release --example split_half -- [n_splits]

use std::time::Instant;

use confscreen::stats::split_half_cv;
use confscreen::synth::{generate_model, BehaviourProfile, ProfileKind};
use confscreen::{ModelDataset, Result, ScreenConfig};

pub fn cohort(seed: u64) -> Result<Vec<ModelDataset>> {
    let mut models = Vec::new();
    for i in 0..10u64 {
        let keep_incorrect = 0.35 + 0.03 * i as f64;
        let profile = BehaviourProfile::new(ProfileKind::Discriminating, 0.88, 0.9, keep_incorrect);
        models.push(generate_model(&profile, seed + i)?.relabel(&format!("disc-{i:02}"), "synthetic"));
    }
    for i in 0..2u64 {
        let ds = generate_model(&BehaviourProfile::r1_matched(), seed + 100 + i)?;
        models.push(ds.relabel(&format!("inv-{i:02}"), "synthetic"));
    }
    Ok(models)
}

pub fn run(n_splits: usize) -> Result<()> {
    let models = cohort(7)?;
    let start = Instant::now();
    let result = split_half_cv(&models, &ScreenConfig::default(), n_splits, 2026)?;
    println!(
        "{} of {} splits retained in {:.1?}",
        result.n_splits_retained,
        result.n_splits_requested,
        start.elapsed()
    );
    println!(
        "median d = {:.2}, 95% CI [{:.2}, {:.2}], P(d > 0) = {:.3}",
        result.median_d, result.d_ci.lower, result.d_ci.upper, result.p_d_positive
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1_000);
    run(n)
}
