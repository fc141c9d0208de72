//! Validity screen: L, Fp, RBS, phi-r and TRIN from the KEEP × correct
//! table, and the three-tier classification.
//!
//! | index | definition |
//! |-------|------------|
//! | L     | (a+b)/n, the KEEP rate |
//! | Fp    | c/(a+c), P(WITHDRAW \| correct) |
//! | RBS   | c/(a+c) − d/(b+d) |
//! | r     | phi = (ad−bc)/√((a+b)(c+d)(a+c)(b+d)) |
//! | TRIN  | share of items whose two probes disagree (keep ≠ bet) |
//!
//! Undefined quantities (zero denominators) are `None`.

use std::fmt;

use rand::distr::Distribution;
use rand_distr::Binomial;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::config::{ScreenConfig, Sidedness};
use crate::data::{ContingencyTable, ItemRecord, ModelDataset};
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::stats::bootstrap::percentile;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityIndices {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "Fp")]
    pub fp: Option<f64>,
    #[serde(rename = "RBS")]
    pub rbs: Option<f64>,
    pub r: Option<f64>,
    #[serde(rename = "TRIN")]
    pub trin: f64,
    pub r_p_value: Option<f64>,
    pub rbs_ci: Option<Interval>,
    pub min_cell: u64,
    pub n: u64,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn false_positive_rate(t: &ContingencyTable) -> Option<f64> {
    ratio(t.c, t.n_correct())
}

pub fn response_bias(t: &ContingencyTable) -> Option<f64> {
    Some(ratio(t.c, t.n_correct())? - ratio(t.d, t.n_incorrect())?)
}

/// Phi coefficient of KEEP × correct; `None` when any margin is empty.
pub fn phi(t: &ContingencyTable) -> Option<f64> {
    let (a, b, c, d) = (t.a as f64, t.b as f64, t.c as f64, t.d as f64);
    let den = (a + b) * (c + d) * (a + c) * (b + d);
    (den > 0.0).then(|| (a * d - b * c) / den.sqrt())
}

/// p-value of phi under z = phi·√n.
pub fn phi_p_value(phi: f64, n: u64, sidedness: Sidedness) -> f64 {
    let z = phi * (n as f64).sqrt();
    let normal = Normal::standard();
    let one = normal.sf(z.abs());
    match sidedness {
        Sidedness::OneTailed => one,
        Sidedness::TwoTailed => (2.0 * one).min(1.0),
    }
}

/// Percentile bootstrap interval of RBS over item resampling.
///
/// Resampling n items with replacement only moves the four cell counts, and
/// those counts are multinomial(n; a/n, b/n, c/n, d/n), so each replicate
/// draws the cells directly. Replicates with an undefined RBS are skipped.
pub fn rbs_bootstrap_ci(t: &ContingencyTable, samples: usize, seed: u64) -> Option<Interval> {
    let n = t.n();
    if n == 0 {
        return None;
    }
    let mut rng = substream(seed, 0);
    let mut sampler = MultinomialCells::new(t);
    let mut draws = Vec::with_capacity(samples);
    for _ in 0..samples {
        if let Some(rbs) = response_bias(&sampler.draw(&mut rng)) {
            draws.push(rbs);
        }
    }
    if draws.is_empty() {
        return None;
    }
    draws.sort_by(f64::total_cmp);
    Some(Interval {
        lower: percentile(&draws, 2.5),
        upper: percentile(&draws, 97.5),
    })
}

/// Multinomial(n; a/n, b/n, c/n, d/n) as a chain of conditional binomials.
/// Stage `k` draws cell `k` from whatever the earlier stages left over; its
/// success probability is fixed, so samplers are cached per leftover count.
struct MultinomialCells {
    n: u64,
    stage_p: [f64; 3],
    cache: [Vec<Option<Binomial>>; 3],
}

impl MultinomialCells {
    fn new(t: &ContingencyTable) -> Self {
        let cells = [t.a, t.b, t.c, t.d];
        let mut stage_p = [0.0; 3];
        let mut mass_left = t.n();
        for (k, p) in stage_p.iter_mut().enumerate() {
            *p = if mass_left == 0 {
                0.0
            } else {
                (cells[k] as f64 / mass_left as f64).min(1.0)
            };
            mass_left -= cells[k];
        }
        let slots = t.n() as usize + 1;
        Self {
            n: t.n(),
            stage_p,
            cache: [vec![None; slots], vec![None; slots], vec![None; slots]],
        }
    }

    fn draw(&mut self, rng: &mut crate::rng::Rng) -> ContingencyTable {
        let mut counts = [0u64; 4];
        let mut remaining = self.n;
        for ((count, &p), cache) in counts.iter_mut().zip(&self.stage_p).zip(&mut self.cache) {
            if remaining == 0 || p == 0.0 {
                continue;
            }
            let k = if p >= 1.0 {
                remaining
            } else {
                cache[remaining as usize]
                    .get_or_insert_with(|| Binomial::new(remaining, p).expect("p in (0,1)"))
                    .sample(rng)
            };
            *count = k;
            remaining -= k;
        }
        counts[3] = remaining;
        ContingencyTable::new(counts[0], counts[1], counts[2], counts[3])
    }
}

pub fn compute_indices(
    table: &ContingencyTable,
    items: &[ItemRecord],
    config: &ScreenConfig,
) -> Result<ValidityIndices> {
    if table.n() == 0 || items.is_empty() {
        return Err(Error::Empty("validity indices need at least one item"));
    }
    if items.len() as u64 != table.n() {
        return Err(Error::InvalidArgument(format!(
            "table covers {} items but {} were supplied",
            table.n(),
            items.len()
        )));
    }
    let discordant = items.iter().filter(|i| i.keep != i.bet).count() as u64;
    Ok(indices_from_counts(table, discordant, config, true))
}

pub(crate) fn indices_from_counts(
    table: &ContingencyTable,
    discordant: u64,
    config: &ScreenConfig,
    with_rbs_ci: bool,
) -> ValidityIndices {
    let n = table.n();
    let r = phi(table);
    let rbs = response_bias(table);
    let rbs_ci = if with_rbs_ci && rbs.is_some() {
        rbs_bootstrap_ci(table, config.rbs_bootstrap_samples, config.seed)
    } else {
        None
    };
    ValidityIndices {
        l: table.n_keep() as f64 / n as f64,
        fp: false_positive_rate(table),
        rbs,
        r,
        trin: discordant as f64 / n as f64,
        r_p_value: r.map(|r| phi_p_value(r, n, config.r_sig_sidedness)),
        rbs_ci,
        min_cell: table.min_cell(),
        n,
    }
}

/// Tier only. The RBS interval is skipped: the one rule that reads it also
/// requires a non-significant r, which already makes the model
/// Indeterminate, so the interval can add a reason but never move the tier.
pub fn screen_tier<'a, I>(items: I, config: &ScreenConfig) -> Result<TierValue>
where
    I: IntoIterator<Item = &'a ItemRecord>,
{
    let mut table = ContingencyTable::default();
    let mut discordant = 0;
    for item in items {
        table = table.with_item(item.keep, item.correct);
        discordant += (item.keep != item.bet) as u64;
    }
    if table.n() == 0 {
        return Err(Error::Empty("validity indices need at least one item"));
    }
    Ok(classify(&indices_from_counts(&table, discordant, config, false), config).value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TierValue {
    Invalid,
    Indeterminate,
    Valid,
}

impl TierValue {
    pub const ALL: [TierValue; 3] = [TierValue::Invalid, TierValue::Indeterminate, TierValue::Valid];

    pub fn label(self) -> &'static str {
        match self {
            TierValue::Invalid => "Invalid",
            TierValue::Indeterminate => "Indeterminate",
            TierValue::Valid => "Valid",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().trim_end_matches('.') {
            "invalid" => Some(TierValue::Invalid),
            "indeterminate" | "indet" => Some(TierValue::Indeterminate),
            "valid" => Some(TierValue::Valid),
            _ => None,
        }
    }
}

impl fmt::Display for TierValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    /// r significantly negative.
    Inversion,
    /// L at or above the Invalid threshold.
    BlanketConfidence,
    /// r undefined because a margin is empty.
    UndefinedR,
    /// r not significantly positive.
    NonsignificantR,
    /// Fp at or above the Indeterminate threshold.
    ElevatedFp,
    /// RBS interval covers zero with r non-significant.
    RbsCiIncludesZero,
}

impl Reason {
    pub fn label(self) -> &'static str {
        match self {
            Reason::Inversion => "inversion",
            Reason::BlanketConfidence => "blanket-confidence",
            Reason::UndefinedR => "undefined-r",
            Reason::NonsignificantR => "nonsignificant-r",
            Reason::ElevatedFp => "elevated-fp",
            Reason::RbsCiIncludesZero => "rbs-ci-includes-zero",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Warning {
    /// Smallest cell below `min_cell_warning`.
    InsufficientData,
    UndefinedR,
}

impl Warning {
    pub fn label(self) -> &'static str {
        match self {
            Warning::InsufficientData => "insufficient-data",
            Warning::UndefinedR => "undefined-r",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tier {
    pub value: TierValue,
    pub reasons: Vec<Reason>,
    pub warnings: Vec<Warning>,
}

/// Rule engine. Invalid rules are checked first, then Indeterminate; a model
/// reaching neither is Valid. The cell-count warning never changes the tier.
pub fn classify(indices: &ValidityIndices, config: &ScreenConfig) -> Tier {
    let mut warnings = Vec::new();
    if indices.min_cell < config.min_cell_warning {
        warnings.push(Warning::InsufficientData);
    }

    let significant = indices.r_p_value.is_some_and(|p| p < config.alpha);
    let sig_negative = significant && indices.r.is_some_and(|r| r < 0.0);
    let sig_positive = significant && indices.r.is_some_and(|r| r > 0.0);

    let mut invalid = Vec::new();
    if sig_negative {
        invalid.push(Reason::Inversion);
    }
    if indices.l >= config.l_invalid_threshold {
        invalid.push(Reason::BlanketConfidence);
    }
    if indices.r.is_none() {
        warnings.push(Warning::UndefinedR);
    }
    if !invalid.is_empty() {
        return Tier {
            value: TierValue::Invalid,
            reasons: invalid,
            warnings,
        };
    }

    let mut indeterminate = Vec::new();
    if indices.r.is_none() {
        indeterminate.push(Reason::UndefinedR);
    } else if !sig_positive {
        indeterminate.push(Reason::NonsignificantR);
    }
    if indices.fp.is_some_and(|fp| fp >= config.fp_indeterminate_threshold) {
        indeterminate.push(Reason::ElevatedFp);
    }
    if !significant && indices.rbs_ci.is_some_and(|ci| ci.contains(0.0)) {
        indeterminate.push(Reason::RbsCiIncludesZero);
    }
    if !indeterminate.is_empty() {
        return Tier {
            value: TierValue::Indeterminate,
            reasons: indeterminate,
            warnings,
        };
    }

    Tier {
        value: TierValue::Valid,
        reasons: Vec::new(),
        warnings,
    }
}

/// Screen result for one model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    pub model: String,
    pub family: String,
    pub table: ContingencyTable,
    pub indices: ValidityIndices,
    pub tier: Tier,
}

pub fn screen_items(items: &[ItemRecord], config: &ScreenConfig) -> Result<(ContingencyTable, ValidityIndices, Tier)> {
    let table = crate::data::contingency(items)?;
    let indices = compute_indices(&table, items, config)?;
    let tier = classify(&indices, config);
    Ok((table, indices, tier))
}

pub fn screen_model(dataset: &ModelDataset, config: &ScreenConfig) -> Result<ValidityReport> {
    let (table, indices, tier) = screen_items(dataset.items(), config)?;
    Ok(ValidityReport {
        model: dataset.model_id().to_string(),
        family: dataset.family().to_string(),
        table,
        indices,
        tier,
    })
}
