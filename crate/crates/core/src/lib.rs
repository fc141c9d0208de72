//! Validity screening and selective-prediction evaluation for item-level
//! LLM confidence logs.
//!
//! Each item carries a correctness label and two binary confidence probes
//! (KEEP/WITHDRAW and BET/NO BET). [`screen`] turns those into the validity
//! indices L, Fp, RBS, phi-r and TRIN plus an Invalid / Indeterminate /
//! Valid verdict. [`selective`] measures Type 2 AUROC, selective gain and
//! risk-coverage curves, and [`stats`] holds the tests that relate the two
//! (exact Mann-Whitney U, ANOVA with η², Cohen's d, Spearman ρ, model-level
//! bootstrap and split-half cross-validation). [`synth`] generates seeded
//! archetype cohorts with closed-form expectations; [`report`] builds the
//! tables, figure data and CLI commands.
//!
//! ```
//! use confscreen::data::ContingencyTable;
//! use confscreen::screen::{phi, response_bias};
//!
//! let t = ContingencyTable::new(24, 71, 423, 6);
//! assert!((phi(&t).unwrap() + 0.798).abs() < 5e-4);
//! assert!((response_bias(&t).unwrap() - 0.868).abs() < 5e-4);
//! ```
//!
//! See `examples/` for one runnable program per capability.

pub mod config;
pub mod data;
pub mod error;
pub mod report;
pub mod rng;
pub mod screen;
pub mod selective;
pub mod stats;
pub mod synth;

pub use config::{RunConfig, ScreenConfig, Sidedness};
pub use data::{
    baseline_accuracy, contingency, ordinal_confidence, parse_dataset, write_dataset, ContingencyTable, ItemRecord,
    ModelDataset, OrdinalConfidence, TrackSet,
};
pub use error::{Error, Result};
pub use screen::{
    classify, compute_indices, screen_model, screen_tier, Tier, TierValue, ValidityIndices, ValidityReport,
};
pub use selective::{
    risk_coverage_curve, selective_accuracy, selective_gain, type2_auroc, RiskCoverageCurve, RiskCoveragePoint,
    SelectiveMetrics,
};
pub use stats::{SplitHalfResult, StatResult};
pub use synth::{expected_indices, generate_model, BehaviourProfile, ProfileKind};
