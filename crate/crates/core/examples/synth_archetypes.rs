//! Draws each behaviour archetype and compares the sampled indices with the
//! closed-form population values.
//!
//!     cargo run --release --example synth_archetypes -- [n_items]

use confscreen::screen::screen_model;
use confscreen::synth::{expected_indices, generate_model, BehaviourProfile, ProfileKind};
use confscreen::{Result, ScreenConfig};

fn fmt(v: Option<f64>) -> String {
    v.map_or("  --- ".into(), |v| format!("{v:+.3}"))
}

pub fn run(n_items: usize) -> Result<()> {
    let profiles = [
        BehaviourProfile::new(ProfileKind::Discriminating, 0.88, 0.9, 0.5),
        BehaviourProfile::new(ProfileKind::Blanket, 0.92, 0.99, 0.98),
        BehaviourProfile::r1_matched(),
        BehaviourProfile::new(ProfileKind::Ambiguous, 0.7, 0.8, 0.78),
    ];
    let config = ScreenConfig::default();
    println!(
        "{:<15} {:>6} {:>13} {:>13} {:>13}  tier",
        "profile", "L", "Fp", "RBS", "r"
    );
    for (i, profile) in profiles.into_iter().enumerate() {
        let profile = profile.with_items(n_items);
        let pop = expected_indices(&profile)?;
        let report = screen_model(&generate_model(&profile, 100 + i as u64)?, &config)?;
        let ix = &report.indices;
        println!(
            "{:<15} {:.3} {} / {} {} / {} {} / {}  {}",
            profile.kind.label(),
            ix.l,
            fmt(ix.fp),
            fmt(pop.fp),
            fmt(ix.rbs),
            fmt(pop.rbs),
            fmt(ix.r),
            fmt(pop.r),
            report.tier.value
        );
    }
    println!("(sampled / population)");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(524);
    run(n)
}
