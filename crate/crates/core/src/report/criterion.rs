//! Criterion-validation battery over model-level summaries.
//!
//! Anything that cannot be computed (a tier missing, too few models,
//! constant inputs) is left `None` and explained in `absences`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::ModelSummary;
use crate::error::Result;
use crate::screen::TierValue;
use crate::stats::{
    bootstrap_tier_means, cohens_d, mann_whitney_u, monotonicity_probability, one_way_anova, spearman_rho, Alternative,
    StatResult, TierMean,
};

/// One (model, track) pair with both r and AUROC defined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackObservation {
    pub model: String,
    pub tier: TierValue,
    pub track: String,
    pub r: f64,
    pub auroc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityCheck {
    pub excluded_model: String,
    pub result: StatResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectSize {
    pub name: String,
    pub d: f64,
    pub n_per_group: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyGroup {
    pub family: String,
    pub models: Vec<String>,
    pub tiers: BTreeMap<TierValue, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub n_models: usize,
    pub tier_counts: BTreeMap<TierValue, usize>,
    pub tier_auroc_anova: Option<StatResult>,
    pub valid_vs_invalid_auroc_u: Option<StatResult>,
    pub valid_vs_invalid_auroc_u_without_extreme: Option<SensitivityCheck>,
    pub valid_vs_invalid_auroc_d: Option<EffectSize>,
    pub tier_auroc_bootstrap: BTreeMap<TierValue, TierMean>,
    pub monotonicity_probability: Option<f64>,
    pub tier_gain70_means: BTreeMap<TierValue, f64>,
    pub tier_gain70_anova: Option<StatResult>,
    pub valid_vs_invalid_gain70_u: Option<StatResult>,
    pub tier_gain50_anova: Option<StatResult>,
    pub within_valid_l_vs_auroc: Option<StatResult>,
    pub within_valid_l_vs_gain70: Option<StatResult>,
    pub within_valid_r_vs_auroc: Option<StatResult>,
    pub per_track_r_vs_auroc: Option<StatResult>,
    pub per_track_r_vs_auroc_within_valid: Option<StatResult>,
    pub families: Vec<FamilyGroup>,
    pub bootstrap_samples: usize,
    pub seed: u64,
    pub absences: Vec<String>,
}

struct Absences(Vec<String>);

impl Absences {
    fn keep<T>(&mut self, what: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.0.push(format!("{what}: {e}"));
                None
            }
        }
    }
}

fn by_tier(rows: &[ModelSummary], metric: impl Fn(&ModelSummary) -> Option<f64>) -> BTreeMap<TierValue, Vec<f64>> {
    let mut out: BTreeMap<TierValue, Vec<f64>> = BTreeMap::new();
    for row in rows {
        if let Some(v) = metric(row) {
            out.entry(row.tier).or_default().push(v);
        }
    }
    out
}

fn tier_anova(groups: &BTreeMap<TierValue, Vec<f64>>, name: &str) -> Result<StatResult> {
    let slices: Vec<&[f64]> = groups.values().map(Vec::as_slice).collect();
    let mut result = one_way_anova(&slices)?;
    result.name = name.into();
    Ok(result)
}

fn group(groups: &BTreeMap<TierValue, Vec<f64>>, tier: TierValue) -> &[f64] {
    groups.get(&tier).map_or(&[], Vec::as_slice)
}

fn named(mut r: StatResult, name: &str) -> StatResult {
    r.name = name.into();
    r
}

fn paired<'a>(
    rows: impl Iterator<Item = &'a ModelSummary>,
    x: impl Fn(&ModelSummary) -> Option<f64>,
    y: impl Fn(&ModelSummary) -> Option<f64>,
) -> (Vec<f64>, Vec<f64>) {
    rows.filter_map(|r| Some((x(r)?, y(r)?))).unzip()
}

pub fn criterion_report(
    rows: &[ModelSummary],
    tracks: Option<&[TrackObservation]>,
    bootstrap_samples: usize,
    seed: u64,
) -> CriterionReport {
    let mut absent = Absences(Vec::new());

    let mut tier_counts = BTreeMap::new();
    for row in rows {
        *tier_counts.entry(row.tier).or_insert(0) += 1;
    }

    let auroc = by_tier(rows, |r| r.auroc);
    let valid = group(&auroc, TierValue::Valid);
    let invalid = group(&auroc, TierValue::Invalid);

    let tier_auroc_anova = absent.keep("tier_auroc_anova", tier_anova(&auroc, "auroc-by-tier-anova"));
    let valid_vs_invalid_auroc_u = absent.keep(
        "valid_vs_invalid_auroc_u",
        mann_whitney_u(valid, invalid, Alternative::Greater).map(|r| named(r, "auroc-valid-gt-invalid")),
    );

    // Sensitivity check: drop the Invalid model farthest below the Valid tier.
    let extreme = rows
        .iter()
        .filter(|r| r.tier == TierValue::Invalid)
        .filter_map(|r| Some((r, r.auroc?)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(r, _)| r);
    let valid_vs_invalid_auroc_u_without_extreme = match extreme {
        Some(extreme) => {
            let rest: Vec<f64> = rows
                .iter()
                .filter(|r| r.tier == TierValue::Invalid && r.model != extreme.model)
                .filter_map(|r| r.auroc)
                .collect();
            absent
                .keep(
                    "valid_vs_invalid_auroc_u_without_extreme",
                    mann_whitney_u(valid, &rest, Alternative::Greater),
                )
                .map(|result| SensitivityCheck {
                    excluded_model: extreme.model.clone(),
                    result: named(result, "auroc-valid-gt-invalid-without-extreme"),
                })
        }
        None => {
            absent
                .0
                .push("valid_vs_invalid_auroc_u_without_extreme: no Invalid model".into());
            None
        }
    };

    let valid_vs_invalid_auroc_d = absent
        .keep("valid_vs_invalid_auroc_d", cohens_d(valid, invalid))
        .map(|d| EffectSize {
            name: "cohens-d-auroc-valid-vs-invalid".into(),
            d,
            n_per_group: vec![valid.len(), invalid.len()],
        });

    let tier_auroc_bootstrap = absent
        .keep(
            "tier_auroc_bootstrap",
            bootstrap_tier_means(&auroc, bootstrap_samples, seed),
        )
        .unwrap_or_default();
    let monotonicity_probability = absent.keep(
        "monotonicity_probability",
        monotonicity_probability(&auroc, bootstrap_samples, seed),
    );

    let gain70 = by_tier(rows, |r| r.gain70);
    let tier_gain70_means = gain70
        .iter()
        .map(|(&t, v)| (t, v.iter().sum::<f64>() / v.len() as f64))
        .collect();
    let tier_gain70_anova = absent.keep("tier_gain70_anova", tier_anova(&gain70, "gain70-by-tier-anova"));
    let valid_vs_invalid_gain70_u = absent.keep(
        "valid_vs_invalid_gain70_u",
        mann_whitney_u(
            group(&gain70, TierValue::Valid),
            group(&gain70, TierValue::Invalid),
            Alternative::Greater,
        )
        .map(|r| named(r, "gain70-valid-gt-invalid")),
    );
    let gain50 = by_tier(rows, |r| r.gain50);
    let tier_gain50_anova = absent.keep("tier_gain50_anova", tier_anova(&gain50, "gain50-by-tier-anova"));

    let valid_rows = || rows.iter().filter(|r| r.tier == TierValue::Valid);
    let mut within = |what: &str, x: fn(&ModelSummary) -> Option<f64>, y: fn(&ModelSummary) -> Option<f64>| {
        let (xs, ys) = paired(valid_rows(), x, y);
        absent.keep(what, spearman_rho(&xs, &ys).map(|r| named(r, what)))
    };
    let within_valid_l_vs_auroc = within("within-valid-L-vs-auroc", |r| r.l, |r| r.auroc);
    let within_valid_l_vs_gain70 = within("within-valid-L-vs-gain70", |r| r.l, |r| r.gain70);
    let within_valid_r_vs_auroc = within("within-valid-r-vs-auroc", |r| r.r, |r| r.auroc);

    let (per_track_r_vs_auroc, per_track_r_vs_auroc_within_valid) = match tracks {
        Some(obs) => {
            let all: (Vec<f64>, Vec<f64>) = obs.iter().map(|o| (o.r, o.auroc)).unzip();
            let valid_only: (Vec<f64>, Vec<f64>) = obs
                .iter()
                .filter(|o| o.tier == TierValue::Valid)
                .map(|o| (o.r, o.auroc))
                .unzip();
            (
                absent.keep(
                    "per-track-r-vs-auroc",
                    spearman_rho(&all.0, &all.1).map(|r| named(r, "per-track-r-vs-auroc")),
                ),
                absent.keep(
                    "per-track-r-vs-auroc-within-valid",
                    spearman_rho(&valid_only.0, &valid_only.1).map(|r| named(r, "per-track-r-vs-auroc-within-valid")),
                ),
            )
        }
        None => {
            absent.0.push("per-track statistics: no item-level track data".into());
            (None, None)
        }
    };

    let mut families: Vec<FamilyGroup> = Vec::new();
    for row in rows {
        let idx = match families.iter().position(|f| f.family == row.family) {
            Some(i) => i,
            None => {
                families.push(FamilyGroup {
                    family: row.family.clone(),
                    models: Vec::new(),
                    tiers: BTreeMap::new(),
                });
                families.len() - 1
            }
        };
        families[idx].models.push(row.model.clone());
        *families[idx].tiers.entry(row.tier).or_insert(0) += 1;
    }

    CriterionReport {
        n_models: rows.len(),
        tier_counts,
        tier_auroc_anova,
        valid_vs_invalid_auroc_u,
        valid_vs_invalid_auroc_u_without_extreme,
        valid_vs_invalid_auroc_d,
        tier_auroc_bootstrap,
        monotonicity_probability,
        tier_gain70_means,
        tier_gain70_anova,
        valid_vs_invalid_gain70_u,
        tier_gain50_anova,
        within_valid_l_vs_auroc,
        within_valid_l_vs_gain70,
        within_valid_r_vs_auroc,
        per_track_r_vs_auroc,
        per_track_r_vs_auroc_within_valid,
        families,
        bootstrap_samples,
        seed,
        absences: absent.0,
    }
}
