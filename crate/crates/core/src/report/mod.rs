//! Per-model evaluation, summary tables, figure data and the command
//! implementations behind the `confscreen` binary.

pub mod commands;
pub mod criterion;
pub mod figures;
pub mod manifest;
pub mod tables;

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ScreenConfig;
use crate::data::ModelDataset;
use crate::error::{Error, Result};
use crate::screen::{screen_model, TierValue, ValidityReport};
use crate::selective::{default_grid, per_track_metrics, selective_metrics, PerTrackReport, SelectiveMetrics};

pub use commands::{Format, Invocation, Output};
pub use criterion::{criterion_report, CriterionReport, TrackObservation};
pub use manifest::RunManifest;

/// Screen, criterion metrics and per-track breakdown for one model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelEvaluation {
    pub screen: ValidityReport,
    pub selective: SelectiveMetrics,
    pub tracks: PerTrackReport,
}

pub fn evaluate_model(dataset: &ModelDataset, config: &ScreenConfig) -> Result<ModelEvaluation> {
    Ok(ModelEvaluation {
        screen: screen_model(dataset, config)?,
        selective: selective_metrics(dataset.items(), &default_grid())?,
        tracks: per_track_metrics(dataset),
    })
}

/// Evaluates every model; output order follows input order.
pub fn evaluate_all(datasets: &[ModelDataset], config: &ScreenConfig) -> Result<Vec<ModelEvaluation>> {
    datasets.par_iter().map(|ds| evaluate_model(ds, config)).collect()
}

/// The model-level numbers the criterion statistics work from. Can be
/// computed from item data or keyed in from a summary table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub model: String,
    pub family: String,
    pub tier: TierValue,
    pub baseline: Option<f64>,
    pub auroc: Option<f64>,
    pub gain80: Option<f64>,
    pub gain70: Option<f64>,
    pub gain50: Option<f64>,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub r: Option<f64>,
}

impl From<&ModelEvaluation> for ModelSummary {
    fn from(e: &ModelEvaluation) -> Self {
        Self {
            model: e.screen.model.clone(),
            family: e.screen.family.clone(),
            tier: e.screen.tier.value,
            baseline: Some(e.selective.baseline),
            auroc: e.selective.auroc,
            gain80: e.selective.gain_at(0.8),
            gain70: e.selective.gain_at(0.7),
            gain50: e.selective.gain_at(0.5),
            l: Some(e.screen.indices.l),
            r: e.screen.indices.r,
        }
    }
}

pub const SUMMARY_HEADER: [&str; 10] = [
    "model", "family", "tier", "baseline", "auroc", "gain80", "gain70", "gain50", "L", "r",
];

/// Reads a model-level summary CSV (header [`SUMMARY_HEADER`]); blank or
/// `---` cells are absent values.
pub fn parse_summary(input: &str) -> Result<Vec<ModelSummary>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().ne(SUMMARY_HEADER.iter().copied()) {
        return Err(Error::Malformed {
            line: 1,
            message: format!("expected header `{}`", SUMMARY_HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let number = |idx: usize| -> Result<Option<f64>> {
            let raw = record.get(idx).unwrap_or("");
            if raw.is_empty() || raw == "---" {
                return Ok(None);
            }
            raw.parse::<f64>().map(Some).map_err(|_| Error::Malformed {
                line,
                message: format!("`{}` is not a number in column {}", raw, SUMMARY_HEADER[idx]),
            })
        };
        let tier = TierValue::parse(&record[2]).ok_or_else(|| Error::Malformed {
            line,
            message: format!("unknown tier `{}`", &record[2]),
        })?;
        out.push(ModelSummary {
            model: record[0].to_string(),
            family: record[1].to_string(),
            tier,
            baseline: number(3)?,
            auroc: number(4)?,
            gain80: number(5)?,
            gain70: number(6)?,
            gain50: number(7)?,
            l: number(8)?,
            r: number(9)?,
        });
    }
    Ok(out)
}

fn tier_block(t: TierValue) -> u8 {
    match t {
        TierValue::Valid => 0,
        TierValue::Indeterminate => 1,
        TierValue::Invalid => 2,
    }
}

/// Report order: Valid, Indeterminate, Invalid blocks, AUROC descending
/// within a block, undefined AUROC last. Stable, so ties keep input order.
pub fn report_order<T>(rows: &mut [T], key: impl Fn(&T) -> (TierValue, Option<f64>)) {
    rows.sort_by(|x, y| {
        let (tx, ax) = key(x);
        let (ty, ay) = key(y);
        tier_block(tx).cmp(&tier_block(ty)).then_with(|| match (ax, ay) {
            (Some(a), Some(b)) => b.total_cmp(&a),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        })
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_parsing() {
        let text = "model,family,tier,baseline,auroc,gain80,gain70,gain50,L,r\n\
                    A,f,Valid,.9,.7,.01,.02,.03,,\n\
                    B,g,Indet.,.8,---,-.01,.0,.1,0.5,-0.1\n";
        let rows = parse_summary(text).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].auroc, Some(0.7));
        assert_eq!(rows[0].l, None);
        assert_eq!(rows[1].tier, TierValue::Indeterminate);
        assert_eq!(rows[1].auroc, None);
        assert_eq!(rows[1].r, Some(-0.1));
        assert!(parse_summary("model,tier\nA,Valid\n").is_err());
        assert!(parse_summary(&text.replace("Valid,.9", "Great,.9")).is_err());
    }

    #[test]
    fn ordering() {
        let mut rows = vec![
            (TierValue::Invalid, Some(0.5)),
            (TierValue::Valid, None),
            (TierValue::Valid, Some(0.6)),
            (TierValue::Indeterminate, Some(0.9)),
            (TierValue::Valid, Some(0.7)),
        ];
        report_order(&mut rows, |r| *r);
        assert_eq!(
            rows,
            vec![
                (TierValue::Valid, Some(0.7)),
                (TierValue::Valid, Some(0.6)),
                (TierValue::Valid, None),
                (TierValue::Indeterminate, Some(0.9)),
                (TierValue::Invalid, Some(0.5)),
            ]
        );
    }
}
