//! Seeded generators for the behavioural archetypes (discriminating,
//! blanket, inverted, ambiguous) and their closed-form population indices.
//!
//! Generative structure: correctness ~ Bernoulli(accuracy); keep depends only
//! on correctness; bet depends only on keep.

use std::path::Path;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::data::{ItemRecord, ModelDataset};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, substream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    Discriminating,
    Blanket,
    Inverted,
    Ambiguous,
}

impl ProfileKind {
    pub fn label(self) -> &'static str {
        match self {
            ProfileKind::Discriminating => "discriminating",
            ProfileKind::Blanket => "blanket",
            ProfileKind::Inverted => "inverted",
            ProfileKind::Ambiguous => "ambiguous",
        }
    }
}

fn default_bet_given_keep() -> f64 {
    0.8
}
fn default_bet_given_withdraw() -> f64 {
    0.2
}
fn default_items() -> usize {
    524
}
fn default_tracks() -> usize {
    6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BehaviourProfile {
    pub kind: ProfileKind,
    pub accuracy: f64,
    pub p_keep_given_correct: f64,
    pub p_keep_given_incorrect: f64,
    #[serde(default = "default_bet_given_keep")]
    pub p_bet_given_keep: f64,
    #[serde(default = "default_bet_given_withdraw")]
    pub p_bet_given_withdraw: f64,
    #[serde(default = "default_items")]
    pub n_items: usize,
    #[serde(default = "default_tracks")]
    pub tracks: usize,
}

impl BehaviourProfile {
    pub fn new(kind: ProfileKind, accuracy: f64, p_keep_given_correct: f64, p_keep_given_incorrect: f64) -> Self {
        Self {
            kind,
            accuracy,
            p_keep_given_correct,
            p_keep_given_incorrect,
            p_bet_given_keep: default_bet_given_keep(),
            p_bet_given_withdraw: default_bet_given_withdraw(),
            n_items: default_items(),
            tracks: default_tracks(),
        }
    }

    /// Back-solved from the (24, 71, 423, 6) inversion table:
    /// accuracy 447/524, P(keep|correct) = 24/447, P(keep|incorrect) = 71/77.
    pub fn r1_matched() -> Self {
        Self::new(ProfileKind::Inverted, 447.0 / 524.0, 24.0 / 447.0, 71.0 / 77.0)
    }

    pub fn with_items(mut self, n_items: usize) -> Self {
        self.n_items = n_items;
        self
    }

    pub fn with_tracks(mut self, tracks: usize) -> Self {
        self.tracks = tracks;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let probabilities = [
            ("accuracy", self.accuracy),
            ("p_keep_given_correct", self.p_keep_given_correct),
            ("p_keep_given_incorrect", self.p_keep_given_incorrect),
            ("p_bet_given_keep", self.p_bet_given_keep),
            ("p_bet_given_withdraw", self.p_bet_given_withdraw),
        ];
        for (name, p) in probabilities {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        if self.n_items == 0 || self.tracks == 0 {
            return Err(Error::InvalidArgument(
                "profile needs at least one item and one track".into(),
            ));
        }
        let (kc, ki) = (self.p_keep_given_correct, self.p_keep_given_incorrect);
        let consistent = match self.kind {
            ProfileKind::Discriminating => kc > ki,
            ProfileKind::Inverted => kc < ki,
            ProfileKind::Blanket => kc >= 0.95 && ki >= 0.95,
            ProfileKind::Ambiguous => (kc - ki).abs() <= 0.05,
        };
        if !consistent {
            return Err(Error::InvalidArgument(format!(
                "{} profile inconsistent with P(keep|correct) = {kc}, P(keep|incorrect) = {ki}",
                self.kind.label()
            )));
        }
        Ok(())
    }
}

/// Draws one model's items. Item `k` gets id `item-kkkk` and track
/// `T{k mod tracks + 1}`, so datasets from different profiles share ids.
pub fn generate_model(profile: &BehaviourProfile, seed: u64) -> Result<ModelDataset> {
    profile.validate()?;
    let model_id = format!("{}-{seed}", profile.kind.label());
    let mut rng = substream(seed, 0);
    let items = (0..profile.n_items)
        .map(|k| {
            let correct = rng.random_bool(profile.accuracy);
            let keep = rng.random_bool(if correct {
                profile.p_keep_given_correct
            } else {
                profile.p_keep_given_incorrect
            });
            let bet = rng.random_bool(if keep {
                profile.p_bet_given_keep
            } else {
                profile.p_bet_given_withdraw
            });
            ItemRecord {
                model_id: model_id.clone(),
                family: "synthetic".into(),
                track: format!("T{}", k % profile.tracks + 1),
                item_id: format!("item-{k:04}"),
                correct,
                keep,
                bet,
            }
        })
        .collect();
    ModelDataset::new(items)
}

/// Population values of the screen's indices under a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PopulationIndices {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "Fp")]
    pub fp: Option<f64>,
    #[serde(rename = "RBS")]
    pub rbs: Option<f64>,
    pub r: Option<f64>,
    #[serde(rename = "TRIN")]
    pub trin: f64,
}

pub fn expected_indices(profile: &BehaviourProfile) -> Result<PopulationIndices> {
    profile.validate()?;
    let acc = profile.accuracy;
    let (kc, ki) = (profile.p_keep_given_correct, profile.p_keep_given_incorrect);
    let a = acc * kc;
    let b = (1.0 - acc) * ki;
    let c = acc * (1.0 - kc);
    let d = (1.0 - acc) * (1.0 - ki);
    let l = a + b;
    let den = (a + b) * (c + d) * (a + c) * (b + d);
    Ok(PopulationIndices {
        l,
        fp: (acc > 0.0).then_some(1.0 - kc),
        rbs: (acc > 0.0 && acc < 1.0).then_some(ki - kc),
        r: (den > 0.0).then(|| (a * d - b * c) / den.sqrt()),
        trin: l * (1.0 - profile.p_bet_given_keep) + (1.0 - l) * profile.p_bet_given_withdraw,
    })
}

/// One entry of a cohort profile file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model_id: String,
    #[serde(default = "default_family")]
    pub family: String,
    /// Per-model seed index; defaults to the entry's position.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub profile: BehaviourProfile,
}

fn default_family() -> String {
    "synthetic".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortSpec {
    pub model: Vec<ModelSpec>,
}

impl CohortSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if spec.model.is_empty() {
            return Err(Error::Config("profile file declares no [[model]] entries".into()));
        }
        for m in &spec.model {
            m.profile
                .validate()
                .map_err(|e| Error::Config(format!("{}: {e}", m.model_id)))?;
        }
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Model `i` is drawn with `derive_seed(seed, spec.seed.unwrap_or(i))`.
    pub fn generate(&self, seed: u64) -> Result<Vec<ModelDataset>> {
        self.model
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let model_seed = derive_seed(seed, m.seed.unwrap_or(i as u64));
                Ok(generate_model(&m.profile, model_seed)?.relabel(&m.model_id, &m.family))
            })
            .collect()
    }
}
