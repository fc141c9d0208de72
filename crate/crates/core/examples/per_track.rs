//! Per-track AUROC and phi-r for a model whose discrimination differs by
//! track, and the Spearman correlation between the two across tracks.
//!
//!     cargo run --example per_track

use confscreen::selective::per_track_metrics;
use confscreen::stats::spearman_rho;
use confscreen::synth::{generate_model, BehaviourProfile, ProfileKind};
use confscreen::{ItemRecord, ModelDataset, Result};

pub fn run() -> Result<()> {
    let mut items = Vec::new();
    for track in 0..6u64 {
        let keep_incorrect = 0.85 - 0.12 * track as f64;
        let profile = BehaviourProfile::new(ProfileKind::Discriminating, 0.8, 0.9, keep_incorrect)
            .with_items(400)
            .with_tracks(1);
        for item in generate_model(&profile, 60 + track)?.items() {
            items.push(ItemRecord {
                model_id: "planted".into(),
                family: "synthetic".into(),
                track: format!("T{}", track + 1),
                item_id: format!("t{track}-{}", item.item_id),
                ..item.clone()
            });
        }
    }
    let report = per_track_metrics(&ModelDataset::new(items)?);
    let mut r = Vec::new();
    let mut auroc = Vec::new();
    for (track, m) in &report.tracks {
        println!(
            "{track}: n={} AUROC={:.3} r={:+.3}",
            m.n,
            m.auroc.unwrap_or(f64::NAN),
            m.r.unwrap_or(f64::NAN)
        );
        if let (Some(x), Some(y)) = (m.r, m.auroc) {
            r.push(x);
            auroc.push(y);
        }
    }
    if let (Some(mean), Some(sd)) = (report.mean_auroc, report.sd_auroc) {
        println!("mean AUROC {mean:.3} (SD {sd:.3})");
    }
    let rho = spearman_rho(&r, &auroc)?;
    println!(
        "Spearman rho(r, AUROC) = {:.3}, p = {:.4}",
        rho.statistic,
        rho.p_value.unwrap_or(f64::NAN)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
