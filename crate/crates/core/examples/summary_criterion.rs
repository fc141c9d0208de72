//! Criterion statistics on the 20-model summary table shipped in
//! `data/cohort20_summary.csv`: tier ANOVA, exact Mann-Whitney U, Cohen's d, tier
//! bootstrap intervals and the selective-gain battery.
//!
//!     cargo run --release --example summary_criterion

use std::path::Path;

use confscreen::report::criterion::criterion_report;
use confscreen::report::parse_summary;
use confscreen::{Result, StatResult};

fn line(label: &str, r: &Option<StatResult>) {
    match r {
        Some(r) => println!(
            "{label:<28} stat={:<8.4} p={} effect={} ({:?}, n={:?})",
            r.statistic,
            r.p_value.map_or("---".into(), |p| format!("{p:.4}")),
            r.effect_size.map_or("---".into(), |e| format!("{e:.3}")),
            r.method,
            r.n_per_group
        ),
        None => println!("{label:<28} ---"),
    }
}

pub fn run(bootstrap_samples: usize) -> Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/cohort20_summary.csv");
    let rows = parse_summary(&std::fs::read_to_string(path)?)?;
    let report = criterion_report(&rows, None, bootstrap_samples, 20_260_418);

    line("AUROC by tier (ANOVA)", &report.tier_auroc_anova);
    line("AUROC Valid > Invalid (U)", &report.valid_vs_invalid_auroc_u);
    if let Some(s) = &report.valid_vs_invalid_auroc_u_without_extreme {
        line(&format!("  without {}", s.excluded_model), &Some(s.result.clone()));
    }
    if let Some(d) = &report.valid_vs_invalid_auroc_d {
        println!("{:<28} d={:.3} n={:?}", "Cohen's d", d.d, d.n_per_group);
    }
    for (tier, m) in &report.tier_auroc_bootstrap {
        println!(
            "  {tier:<14} mean {:.3} [{:.3}, {:.3}] (n={})",
            m.mean, m.lower, m.upper, m.n
        );
    }
    if let Some(p) = report.monotonicity_probability {
        println!("P(Invalid < Indeterminate < Valid) = {p:.3}");
    }
    line("gain70 by tier (ANOVA)", &report.tier_gain70_anova);
    line("gain70 Valid > Invalid (U)", &report.valid_vs_invalid_gain70_u);
    line("gain50 by tier (ANOVA)", &report.tier_gain50_anova);
    for a in &report.absences {
        println!("not computed: {a}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run(10_000)
}
