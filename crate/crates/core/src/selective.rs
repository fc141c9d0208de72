//! Criterion metrics: Type 2 AUROC on the ordinal confidence, selective
//! accuracy and gain, risk-coverage curves and their area.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::data::{baseline_accuracy, contingency, ItemRecord, ModelDataset, OrdinalConfidence};
use crate::error::{Error, Result};
use crate::screen::phi;

/// Per-level (total, correct) counts.
#[derive(Debug, Clone, Copy, Default)]
struct LevelCounts {
    total: [u64; OrdinalConfidence::LEVELS],
    correct: [u64; OrdinalConfidence::LEVELS],
}

impl LevelCounts {
    fn tally<'a, I: IntoIterator<Item = &'a ItemRecord>>(items: I) -> Self {
        let mut counts = Self::default();
        for item in items {
            let level = item.confidence().index();
            counts.total[level] += 1;
            counts.correct[level] += item.correct as u64;
        }
        counts
    }

    fn n(&self) -> u64 {
        self.total.iter().sum()
    }

    fn n_correct(&self) -> u64 {
        self.correct.iter().sum()
    }
}

/// Type 2 AUROC of ordinal confidence predicting correctness, via the
/// Mann-Whitney rank-sum identity with mid-ranks for ties. `None` when either
/// class is empty.
pub fn type2_auroc<'a, I: IntoIterator<Item = &'a ItemRecord>>(items: I) -> Option<f64> {
    auroc_from_counts(&LevelCounts::tally(items))
}

fn auroc_from_counts(counts: &LevelCounts) -> Option<f64> {
    let n_correct = counts.n_correct();
    let n_incorrect = counts.n() - n_correct;
    if n_correct == 0 || n_incorrect == 0 {
        return None;
    }
    // Twice the mid-rank of a level is (items below)·2 + size + 1; summing in
    // doubled units keeps the arithmetic in integers.
    let mut below = 0u64;
    let mut doubled_rank_sum = 0u128;
    for level in 0..OrdinalConfidence::LEVELS {
        let size = counts.total[level];
        if size > 0 {
            let doubled_mid_rank = 2 * below + size + 1;
            doubled_rank_sum += counts.correct[level] as u128 * doubled_mid_rank as u128;
        }
        below += size;
    }
    let doubled_u = doubled_rank_sum - (n_correct as u128) * (n_correct as u128 + 1);
    Some(doubled_u as f64 / (2.0 * n_correct as f64 * n_incorrect as f64))
}

fn check_coverage(coverage: f64) -> Result<()> {
    if coverage > 0.0 && coverage <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "coverage must lie in (0, 1], got {coverage}"
        )))
    }
}

/// Accuracy of the top `coverage` fraction by confidence.
///
/// The retained mass is exactly `coverage·n`. Levels above the boundary are
/// kept whole; the boundary tie group contributes each item at weight
/// `remaining / group size`, the expectation over random tie orders.
pub fn selective_accuracy(items: &[ItemRecord], coverage: f64) -> Result<f64> {
    check_coverage(coverage)?;
    let counts = LevelCounts::tally(items);
    if counts.n() == 0 {
        return Err(Error::Empty("selective accuracy needs at least one item"));
    }
    Ok(selective_accuracy_counts(&counts, coverage))
}

fn selective_accuracy_counts(counts: &LevelCounts, coverage: f64) -> f64 {
    let target = coverage * counts.n() as f64;
    let mut kept = 0u64;
    let mut kept_correct = 0u64;
    for level in (0..OrdinalConfidence::LEVELS).rev() {
        let size = counts.total[level];
        if size == 0 {
            continue;
        }
        let remaining = target - kept as f64;
        if size as f64 <= remaining {
            kept += size;
            kept_correct += counts.correct[level];
            continue;
        }
        let group_accuracy = counts.correct[level] as f64 / size as f64;
        if kept == 0 {
            return group_accuracy;
        }
        return (kept_correct as f64 + remaining * group_accuracy) / target;
    }
    kept_correct as f64 / kept as f64
}

pub fn selective_gain(items: &[ItemRecord], coverage: f64) -> Result<f64> {
    Ok(selective_accuracy(items, coverage)? - baseline_accuracy(items)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiskCoveragePoint {
    pub coverage: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskCoverageCurve {
    pub points: Vec<RiskCoveragePoint>,
    pub rc_auc: f64,
}

/// 1.0, 0.9, …, 0.1.
pub fn default_grid() -> Vec<f64> {
    (1..=10).rev().map(|k| k as f64 / 10.0).collect()
}

/// Trapezoidal area under accuracy over the grid's coverage span, written as
/// `span·y₀ + Σ wᵢ(yᵢ − y₀)` so a flat curve integrates to exactly `span·y₀`.
pub fn trapezoid_area(points: &[RiskCoveragePoint]) -> f64 {
    let Some(first) = points.first() else {
        return 0.0;
    };
    let span = first.coverage - points[points.len() - 1].coverage;
    let y0 = first.accuracy;
    let excess: f64 = points
        .windows(2)
        .map(|w| (w[0].coverage - w[1].coverage) * ((w[0].accuracy - y0) + (w[1].accuracy - y0)) / 2.0)
        .sum();
    span * y0 + excess
}

pub fn risk_coverage_curve(items: &[ItemRecord], grid: &[f64]) -> Result<RiskCoverageCurve> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("coverage grid is empty".into()));
    }
    for &c in grid {
        check_coverage(c)?;
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument(
            "coverage grid must be strictly decreasing".into(),
        ));
    }
    let counts = LevelCounts::tally(items);
    if counts.n() == 0 {
        return Err(Error::Empty("risk-coverage curve needs at least one item"));
    }
    let points: Vec<_> = grid
        .iter()
        .map(|&coverage| RiskCoveragePoint {
            coverage,
            accuracy: selective_accuracy_counts(&counts, coverage),
        })
        .collect();
    Ok(RiskCoverageCurve {
        rc_auc: trapezoid_area(&points),
        points,
    })
}

pub const GAIN_COVERAGES: [f64; 3] = [0.8, 0.7, 0.5];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectiveMetrics {
    pub auroc: Option<f64>,
    pub baseline: f64,
    /// (coverage, gain) pairs in descending coverage.
    pub gains: Vec<(f64, f64)>,
    pub curve: RiskCoverageCurve,
    pub n_correct: u64,
    pub n_incorrect: u64,
}

impl SelectiveMetrics {
    pub fn gain_at(&self, coverage: f64) -> Option<f64> {
        self.gains
            .iter()
            .find(|(c, _)| (c - coverage).abs() < 1e-12)
            .map(|&(_, g)| g)
    }
}

pub fn selective_metrics(items: &[ItemRecord], grid: &[f64]) -> Result<SelectiveMetrics> {
    let counts = LevelCounts::tally(items);
    if counts.n() == 0 {
        return Err(Error::Empty("selective metrics need at least one item"));
    }
    let baseline = counts.n_correct() as f64 / counts.n() as f64;
    let gains = GAIN_COVERAGES
        .iter()
        .map(|&c| (c, selective_accuracy_counts(&counts, c) - baseline))
        .collect();
    Ok(SelectiveMetrics {
        auroc: auroc_from_counts(&counts),
        baseline,
        gains,
        curve: risk_coverage_curve(items, grid)?,
        n_correct: counts.n_correct(),
        n_incorrect: counts.n() - counts.n_correct(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackMetrics {
    pub auroc: Option<f64>,
    pub r: Option<f64>,
    pub n: u64,
    pub n_correct: u64,
    pub n_incorrect: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerTrackReport {
    pub model: String,
    pub tracks: BTreeMap<String, TrackMetrics>,
    /// Mean and sample SD of AUROC over tracks where it is defined.
    pub mean_auroc: Option<f64>,
    pub sd_auroc: Option<f64>,
}

pub fn per_track_metrics(dataset: &ModelDataset) -> PerTrackReport {
    let mut by_track: BTreeMap<&str, Vec<&ItemRecord>> = BTreeMap::new();
    for item in dataset.items() {
        by_track.entry(item.track.as_str()).or_default().push(item);
    }
    let tracks: BTreeMap<String, TrackMetrics> = by_track
        .into_iter()
        .map(|(track, items)| {
            let counts = LevelCounts::tally(items.iter().copied());
            let table = contingency(items.iter().copied()).expect("track partition is non-empty");
            let metrics = TrackMetrics {
                auroc: auroc_from_counts(&counts),
                r: phi(&table),
                n: table.n(),
                n_correct: table.n_correct(),
                n_incorrect: table.n_incorrect(),
            };
            (track.to_string(), metrics)
        })
        .collect();

    let defined: Vec<f64> = tracks.values().filter_map(|m| m.auroc).collect();
    let mean_auroc = (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64);
    let sd_auroc = mean_auroc.filter(|_| defined.len() >= 2).map(|m| {
        let ss: f64 = defined.iter().map(|x| (x - m).powi(2)).sum();
        (ss / (defined.len() - 1) as f64).sqrt()
    });
    PerTrackReport {
        model: dataset.model_id().to_string(),
        tracks,
        mean_auroc,
        sd_auroc,
    }
}
