//! Markdown and CSV renderers. Three decimals throughout; undefined values
//! print as `---`.

use super::{ModelEvaluation, ModelSummary};
use crate::screen::{TierValue, ValidityReport};
use crate::selective::PerTrackReport;

pub const UNDEFINED: &str = "---";

pub fn fmt3(v: Option<f64>) -> String {
    v.map_or_else(|| UNDEFINED.to_string(), |x| format!("{x:.3}"))
}

pub fn fmt_signed(v: Option<f64>) -> String {
    v.map_or_else(|| UNDEFINED.to_string(), |x| format!("{x:+.3}"))
}

fn fmt_p(v: Option<f64>) -> String {
    match v {
        None => UNDEFINED.to_string(),
        Some(p) if p < 0.001 => "<0.001".to_string(),
        Some(p) => format!("{p:.3}"),
    }
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn markdown(&self) -> String {
        let mut out = format!("| {} |\n", self.header.join(" | "));
        out.push_str(&format!("|{}\n", "---|".repeat(self.header.len())));
        for row in &self.rows {
            out.push_str(&format!("| {} |\n", row.join(" | ")));
        }
        out
    }

    pub fn csv(&self) -> String {
        let mut out = format!("{}\n", self.header.join(","));
        for row in &self.rows {
            out.push_str(&format!("{}\n", row.join(",")));
        }
        out
    }
}

fn strings<const N: usize>(xs: [&str; N]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

pub fn vrs_table(reports: &[&ValidityReport]) -> Table {
    let header = strings([
        "model", "n", "L", "Fp", "RBS", "r", "r_p", "TRIN", "min_cell", "tier", "reasons", "warnings",
    ]);
    let rows = reports
        .iter()
        .map(|r| {
            let i = &r.indices;
            vec![
                r.model.clone(),
                i.n.to_string(),
                fmt3(Some(i.l)),
                fmt3(i.fp),
                fmt_signed(i.rbs),
                fmt_signed(i.r),
                fmt_p(i.r_p_value),
                fmt3(Some(i.trin)),
                i.min_cell.to_string(),
                r.tier.value.to_string(),
                r.tier.reasons.iter().map(|x| x.label()).collect::<Vec<_>>().join(";"),
                r.tier.warnings.iter().map(|x| x.label()).collect::<Vec<_>>().join(";"),
            ]
        })
        .collect();
    Table { header, rows }
}

pub fn selective_table(rows: &[&ModelSummary]) -> Table {
    let header = strings(["model", "tier", "baseline", "auroc", "gain80", "gain70", "gain50"]);
    let rows = rows
        .iter()
        .map(|s| {
            vec![
                s.model.clone(),
                s.tier.to_string(),
                fmt3(s.baseline),
                fmt3(s.auroc),
                fmt_signed(s.gain80),
                fmt_signed(s.gain70),
                fmt_signed(s.gain50),
            ]
        })
        .collect();
    Table { header, rows }
}

/// AUROC by track, one column per declared track.
pub fn track_table(rows: &[(&PerTrackReport, TierValue)], tracks: &[&str]) -> Table {
    let mut header = strings(["model", "tier"]);
    header.extend(tracks.iter().map(|t| t.to_string()));
    header.extend(strings(["mean", "sd"]));
    let rows = rows
        .iter()
        .map(|(report, tier)| {
            let mut row = vec![report.model.clone(), tier.to_string()];
            row.extend(tracks.iter().map(|t| fmt3(report.tracks.get(*t).and_then(|m| m.auroc))));
            row.push(fmt3(report.mean_auroc));
            row.push(fmt3(report.sd_auroc));
            row
        })
        .collect();
    Table { header, rows }
}

pub fn evaluations_in_report_order(evals: &[ModelEvaluation]) -> Vec<&ModelEvaluation> {
    let mut ordered: Vec<&ModelEvaluation> = evals.iter().collect();
    super::report_order(&mut ordered, |e| (e.screen.tier.value, e.selective.auroc));
    ordered
}
