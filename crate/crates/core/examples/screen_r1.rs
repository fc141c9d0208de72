//! Screens the inversion model's contingency table and a discriminating
//! synthetic model, printing indices, tier and reasons.
//!
//!     cargo run --example screen_r1

use confscreen::data::ContingencyTable;
use confscreen::screen::screen_items;
use confscreen::synth::{generate_model, BehaviourProfile, ProfileKind};
use confscreen::{ItemRecord, Result, ScreenConfig};

fn items_from_table(t: ContingencyTable) -> Vec<ItemRecord> {
    let cells = [
        (t.a, true, true),
        (t.b, true, false),
        (t.c, false, true),
        (t.d, false, false),
    ];
    let mut items = Vec::new();
    for (count, keep, correct) in cells {
        for _ in 0..count {
            items.push(ItemRecord {
                model_id: "DeepSeek-R1".into(),
                family: "DeepSeek".into(),
                track: "T1".into(),
                item_id: format!("q{:03}", items.len()),
                correct,
                keep,
                bet: keep,
            });
        }
    }
    items
}

fn show(label: &str, items: &[ItemRecord], config: &ScreenConfig) -> Result<()> {
    let (t, ix, tier) = screen_items(items, config)?;
    println!("{label}: a={} b={} c={} d={}", t.a, t.b, t.c, t.d);
    let opt = |v: Option<f64>| v.map_or("---".to_string(), |v| format!("{v:+.3}"));
    println!(
        "  L={:.3} Fp={} RBS={} r={} TRIN={:.3}",
        ix.l,
        opt(ix.fp),
        opt(ix.rbs),
        opt(ix.r),
        ix.trin
    );
    if let Some(ci) = ix.rbs_ci {
        println!("  RBS 95% CI [{:+.3}, {:+.3}]", ci.lower, ci.upper);
    }
    let reasons: Vec<_> = tier.reasons.iter().map(|r| r.label()).collect();
    let warnings: Vec<_> = tier.warnings.iter().map(|w| w.label()).collect();
    println!("  tier={} reasons={reasons:?} warnings={warnings:?}", tier.value);
    Ok(())
}

pub fn run() -> Result<()> {
    let config = ScreenConfig::default();
    show(
        "inversion",
        &items_from_table(ContingencyTable::new(24, 71, 423, 6)),
        &config,
    )?;
    let profile = BehaviourProfile::new(ProfileKind::Discriminating, 0.9, 0.92, 0.45);
    show("discriminating", generate_model(&profile, 1)?.items(), &config)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
