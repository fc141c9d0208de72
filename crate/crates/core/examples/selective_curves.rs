//! Type 2 AUROC, selective gain and the risk-coverage curve for three
//! archetypes.
//!
//!     cargo run --example selective_curves

use confscreen::selective::{default_grid, selective_metrics};
use confscreen::synth::{generate_model, BehaviourProfile, ProfileKind};
use confscreen::Result;

pub fn run() -> Result<()> {
    let profiles = [
        (
            "discriminating",
            BehaviourProfile::new(ProfileKind::Discriminating, 0.85, 0.9, 0.4),
        ),
        ("blanket", BehaviourProfile::new(ProfileKind::Blanket, 0.9, 0.99, 0.98)),
        ("inverted", BehaviourProfile::r1_matched()),
    ];
    let grid = default_grid();
    for (label, profile) in profiles {
        let ds = generate_model(&profile, 3)?;
        let m = selective_metrics(ds.items(), &grid)?;
        println!(
            "{label}: baseline {:.3}, AUROC {}, rc_auc {:.4}",
            m.baseline,
            m.auroc.map_or("---".into(), |a| format!("{a:.3}")),
            m.curve.rc_auc
        );
        for (coverage, gain) in &m.gains {
            println!("  gain at {:.0}% coverage: {gain:+.3}", coverage * 100.0);
        }
        let curve: Vec<String> = m
            .curve
            .points
            .iter()
            .map(|p| format!("{:.1}:{:.3}", p.coverage, p.accuracy))
            .collect();
        println!("  curve {}", curve.join(" "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
