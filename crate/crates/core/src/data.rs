//! Item-level data model: records, per-model datasets, the KEEP × correct
//! contingency table and the four-level ordinal confidence encoding.
//!
//! The canonical on-disk format is a flat UTF-8 CSV with the header
//!
//! ```text
//! model,family,track,item_id,correct,keep,bet
//! ```
//!
//! where `correct`, `keep` and `bet` are `0`/`1`.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 7] = ["model", "family", "track", "item_id", "correct", "keep", "bet"];

/// One benchmark item's outcome for one model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemRecord {
    pub model_id: String,
    pub family: String,
    pub track: String,
    pub item_id: String,
    pub correct: bool,
    /// KEEP = true, WITHDRAW = false.
    pub keep: bool,
    /// BET = true, NO BET = false.
    pub bet: bool,
}

impl ItemRecord {
    pub fn confidence(&self) -> OrdinalConfidence {
        ordinal_confidence(self.keep, self.bet)
    }
}

/// Ordinal confidence built from the two binary probes.
///
/// KEEP+BET = 3, KEEP+NO BET = 2, WITHDRAW+BET = 1, WITHDRAW+NO BET = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(into = "u8")]
pub struct OrdinalConfidence(u8);

impl OrdinalConfidence {
    pub const LEVELS: usize = 4;

    pub fn level(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<OrdinalConfidence> for u8 {
    fn from(c: OrdinalConfidence) -> u8 {
        c.0
    }
}

impl fmt::Display for OrdinalConfidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn ordinal_confidence(keep: bool, bet: bool) -> OrdinalConfidence {
    OrdinalConfidence(2 * keep as u8 + bet as u8)
}

/// 2×2 counts of KEEP/WITHDRAW against correct/incorrect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ContingencyTable {
    /// KEEP ∧ correct
    pub a: u64,
    /// KEEP ∧ incorrect
    pub b: u64,
    /// WITHDRAW ∧ correct
    pub c: u64,
    /// WITHDRAW ∧ incorrect
    pub d: u64,
}

impl ContingencyTable {
    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Self {
        Self { a, b, c, d }
    }

    pub fn n(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }

    pub fn n_keep(&self) -> u64 {
        self.a + self.b
    }

    pub fn n_correct(&self) -> u64 {
        self.a + self.c
    }

    pub fn n_incorrect(&self) -> u64 {
        self.b + self.d
    }

    pub fn min_cell(&self) -> u64 {
        self.a.min(self.b).min(self.c).min(self.d)
    }

    pub fn scaled(&self, k: u64) -> Self {
        Self::new(self.a * k, self.b * k, self.c * k, self.d * k)
    }

    pub fn with_item(mut self, keep: bool, correct: bool) -> Self {
        match (keep, correct) {
            (true, true) => self.a += 1,
            (true, false) => self.b += 1,
            (false, true) => self.c += 1,
            (false, false) => self.d += 1,
        }
        self
    }
}

pub fn contingency<'a, I>(items: I) -> Result<ContingencyTable>
where
    I: IntoIterator<Item = &'a ItemRecord>,
{
    let mut table = ContingencyTable::default();
    for item in items {
        table = table.with_item(item.keep, item.correct);
    }
    if table.n() == 0 {
        return Err(Error::Empty("contingency requires at least one item"));
    }
    Ok(table)
}

pub fn baseline_accuracy<'a, I>(items: I) -> Result<f64>
where
    I: IntoIterator<Item = &'a ItemRecord>,
{
    let table = contingency(items)?;
    Ok(table.n_correct() as f64 / table.n() as f64)
}

/// All items for one model, in input order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelDataset {
    model_id: String,
    family: String,
    items: Vec<ItemRecord>,
}

impl ModelDataset {
    pub fn new(items: Vec<ItemRecord>) -> Result<Self> {
        let first = items
            .first()
            .ok_or(Error::Empty("a model dataset needs at least one item"))?;
        let model_id = first.model_id.clone();
        let family = first.family.clone();
        if let Some(bad) = items.iter().find(|i| i.model_id != model_id) {
            return Err(Error::InvalidArgument(format!(
                "dataset mixes models `{model_id}` and `{}`",
                bad.model_id
            )));
        }
        if let Some(bad) = items.iter().find(|i| i.family != family) {
            return Err(Error::InvalidArgument(format!(
                "model `{model_id}` has inconsistent families `{family}` and `{}`",
                bad.family
            )));
        }
        Ok(Self {
            model_id,
            family,
            items,
        })
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn items(&self) -> &[ItemRecord] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contingency(&self) -> ContingencyTable {
        // non-empty by construction
        contingency(&self.items).expect("dataset is non-empty")
    }

    /// Same items under a different model id and family.
    pub fn relabel(mut self, model_id: &str, family: &str) -> Self {
        for item in &mut self.items {
            item.model_id = model_id.to_string();
            item.family = family.to_string();
        }
        self.model_id = model_id.to_string();
        self.family = family.to_string();
        self
    }
}

/// Declared set of track labels a dataset may use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackSet(BTreeSet<String>);

impl TrackSet {
    pub fn new<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self(labels.into_iter().map(Into::into).collect())
    }

    /// `T1` through `Tn`.
    pub fn numbered(n: usize) -> Self {
        Self::new((1..=n).map(|i| format!("T{i}")))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.0.contains(label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl Default for TrackSet {
    fn default() -> Self {
        Self::numbered(6)
    }
}

fn parse_flag(raw: &str, field: &'static str, line: u64) -> Result<bool> {
    match raw {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(Error::NonBinary {
            line,
            field,
            value: other.to_string(),
        }),
    }
}

fn valid_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'.' | b'_' | b'-'))
}

/// Parses the canonical CSV into one dataset per distinct model, in order of
/// first appearance. Row order within a model is preserved.
pub fn parse_dataset(input: &str, tracks: &TrackSet) -> Result<Vec<ModelDataset>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input.as_bytes());
    let mut records = reader.records();

    match records.next() {
        None => {
            return Err(Error::Malformed {
                line: 1,
                message: "missing header".into(),
            })
        }
        Some(header) => {
            let header = header?;
            if header.iter().ne(CSV_HEADER.iter().copied()) {
                return Err(Error::Malformed {
                    line: 1,
                    message: format!("expected header `{}`", CSV_HEADER.join(",")),
                });
            }
        }
    }

    let mut order: Vec<String> = Vec::new();
    let mut by_model: HashMap<String, Vec<ItemRecord>> = HashMap::new();
    let mut seen: HashMap<(String, String), u64> = HashMap::new();

    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != CSV_HEADER.len() {
            return Err(Error::Malformed {
                line,
                message: format!("expected {} fields, found {}", CSV_HEADER.len(), record.len()),
            });
        }
        for (name, value) in CSV_HEADER.iter().zip(record.iter()).take(4) {
            if !valid_identifier(value) {
                return Err(Error::Malformed {
                    line,
                    message: format!("invalid {name} `{value}`"),
                });
            }
        }
        let item = ItemRecord {
            model_id: record[0].to_string(),
            family: record[1].to_string(),
            track: record[2].to_string(),
            item_id: record[3].to_string(),
            correct: parse_flag(&record[4], "correct", line)?,
            keep: parse_flag(&record[5], "keep", line)?,
            bet: parse_flag(&record[6], "bet", line)?,
        };
        if !tracks.contains(&item.track) {
            return Err(Error::UnknownTrack {
                line,
                track: item.track,
            });
        }
        match seen.entry((item.model_id.clone(), item.item_id.clone())) {
            Entry::Occupied(first) => {
                return Err(Error::DuplicateItem {
                    model: item.model_id,
                    item_id: item.item_id,
                    first_line: *first.get(),
                    second_line: line,
                })
            }
            Entry::Vacant(slot) => {
                slot.insert(line);
            }
        }
        let bucket = by_model.entry(item.model_id.clone()).or_insert_with(|| {
            order.push(item.model_id.clone());
            Vec::new()
        });
        if let Some(first) = bucket.first() {
            if first.family != item.family {
                return Err(Error::Malformed {
                    line,
                    message: format!(
                        "model `{}` declared with family `{}` earlier, `{}` here",
                        item.model_id, first.family, item.family
                    ),
                });
            }
        }
        bucket.push(item);
    }

    order
        .into_iter()
        .map(|model| ModelDataset::new(by_model.remove(&model).unwrap_or_default()))
        .collect()
}

/// Writes datasets back out in the canonical CSV format.
pub fn write_dataset<'a, I>(datasets: I) -> String
where
    I: IntoIterator<Item = &'a ModelDataset>,
{
    let mut out = CSV_HEADER.join(",");
    out.push('\n');
    for dataset in datasets {
        for i in dataset.items() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                i.model_id, i.family, i.track, i.item_id, i.correct as u8, i.keep as u8, i.bet as u8
            ));
        }
    }
    out
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn item(model: &str, id: usize, correct: bool, keep: bool, bet: bool) -> ItemRecord {
        ItemRecord {
            model_id: model.into(),
            family: "fam".into(),
            track: "T1".into(),
            item_id: format!("i{id:04}"),
            correct,
            keep,
            bet,
        }
    }

    /// Items realising a given contingency table; bet mirrors keep.
    pub fn from_table(model: &str, t: ContingencyTable) -> Vec<ItemRecord> {
        let mut out = Vec::new();
        let cells = [
            (t.a, true, true),
            (t.b, true, false),
            (t.c, false, true),
            (t.d, false, false),
        ];
        for (count, keep, correct) in cells {
            for _ in 0..count {
                let id = out.len();
                out.push(item(model, id, correct, keep, keep));
            }
        }
        out
    }
}
