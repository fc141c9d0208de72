//! Command implementations. Each command is a pure function of its input
//! file, config file and seed; the binary only parses flags and writes the
//! returned [`Output`].

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use super::criterion::{criterion_report, TrackObservation};
use super::figures::figure_csvs;
use super::manifest::RunManifest;
use super::tables::{evaluations_in_report_order, fmt3, selective_table, track_table, vrs_table, Table};
use super::{evaluate_all, parse_summary, report_order, ModelEvaluation, ModelSummary};
use crate::config::RunConfig;
use crate::data::{parse_dataset, write_dataset, ModelDataset};
use crate::error::{Error, Result};
use crate::screen::screen_model;
use crate::stats::{split_half_cv, StatResult};
use crate::synth::CohortSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Md,
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Md => "md",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Screen,
    Selective,
    Stats,
    SplitHalf,
    Synth,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Screen => "screen",
            Command::Selective => "selective",
            Command::Stats => "stats",
            Command::SplitHalf => "splithalf",
            Command::Synth => "synth",
        }
    }
}

/// Parsed command line, independent of the argument parser.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub command: Command,
    pub input: Option<PathBuf>,
    /// Model-level summary CSV, accepted by `stats` instead of item data.
    pub summary: Option<PathBuf>,
    pub config: Option<PathBuf>,
    /// Cohort profile file for `synth`.
    pub profiles: Option<PathBuf>,
    pub seed: Option<u64>,
    pub format: Format,
    pub bootstrap_n: usize,
    pub splits: usize,
}

impl Invocation {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: None,
            summary: None,
            config: None,
            profiles: None,
            seed: None,
            format: Format::default(),
            bootstrap_n: 10_000,
            splits: 1_000,
        }
    }
}

/// `primary` is what goes to stdout; `files` is what `--out DIR` receives.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub primary: String,
    pub files: Vec<(String, String)>,
}

impl Output {
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, contents) in &self.files {
            std::fs::write(dir.join(name), contents)?;
        }
        Ok(())
    }
}

pub struct Context {
    pub config: RunConfig,
    pub manifest: RunManifest,
    pub format: Format,
}

fn path_string(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

impl Context {
    pub fn load(inv: &Invocation) -> Result<Self> {
        let mut config = match &inv.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = inv.seed {
            config.screen.seed = seed;
        }
        let input = inv.input.as_ref().or(inv.summary.as_ref()).or(inv.profiles.as_ref());
        let manifest = RunManifest::new(
            inv.command.name(),
            input.map(|p| p.display().to_string()),
            path_string(&inv.config),
            config.screen.seed,
            &config.screen,
        );
        Ok(Self {
            config,
            manifest,
            format: inv.format,
        })
    }

    fn json<T: Serialize>(&self, key: &str, value: &T) -> Result<String> {
        let mut doc = serde_json::Map::new();
        doc.insert("manifest".into(), serde_json::to_value(&self.manifest)?);
        doc.insert(key.into(), serde_json::to_value(value)?);
        Ok(serde_json::to_string_pretty(&doc)? + "\n")
    }

    fn manifest_file(&self) -> Result<(String, String)> {
        Ok((
            "manifest.json".into(),
            serde_json::to_string_pretty(&self.manifest)? + "\n",
        ))
    }

    fn table_output(&self, stem: &str, table: &Table, json_name: &str, json: String) -> Result<Output> {
        let mut files = vec![self.manifest_file()?, (json_name.to_string(), json.clone())];
        let primary = match self.format {
            Format::Md => table.markdown(),
            Format::Csv => table.csv(),
            Format::Json => json,
        };
        if self.format != Format::Json {
            files.push((format!("{stem}.{}", self.format.extension()), primary.clone()));
        }
        Ok(Output { primary, files })
    }
}

pub fn load_items(inv: &Invocation, config: &RunConfig) -> Result<Vec<ModelDataset>> {
    let path = inv
        .input
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("--input is required".into()))?;
    let text = std::fs::read_to_string(path)?;
    let datasets = parse_dataset(&text, &config.tracks)?;
    if datasets.is_empty() {
        return Err(Error::Empty("input contains no item rows"));
    }
    Ok(datasets)
}

pub fn run(inv: &Invocation) -> Result<Output> {
    let ctx = Context::load(inv)?;
    match inv.command {
        Command::Screen => cmd_screen(&load_items(inv, &ctx.config)?, &ctx),
        Command::Selective => cmd_selective(&load_items(inv, &ctx.config)?, &ctx),
        Command::Stats => match &inv.summary {
            Some(path) => {
                let rows = parse_summary(&std::fs::read_to_string(path)?)?;
                if rows.is_empty() {
                    return Err(Error::Empty("summary contains no models"));
                }
                cmd_stats_summary(&rows, &ctx, inv.bootstrap_n)
            }
            None => cmd_stats(&load_items(inv, &ctx.config)?, &ctx, inv.bootstrap_n),
        },
        Command::SplitHalf => cmd_splithalf(&load_items(inv, &ctx.config)?, &ctx, inv.splits),
        Command::Synth => {
            let path = inv
                .profiles
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("--profiles is required".into()))?;
            cmd_synth(&CohortSpec::load(path)?, &ctx)
        }
    }
}

pub fn cmd_screen(datasets: &[ModelDataset], ctx: &Context) -> Result<Output> {
    let reports = datasets
        .iter()
        .map(|ds| screen_model(ds, &ctx.config.screen))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<_> = reports.iter().collect();
    let json = ctx.json("models", &reports)?;
    ctx.table_output("vrs_table", &vrs_table(&refs), "screen.json", json)
}

#[derive(Serialize)]
struct SelectiveRow<'a> {
    summary: ModelSummary,
    n_correct: u64,
    n_incorrect: u64,
    curve: &'a crate::selective::RiskCoverageCurve,
    tracks: &'a crate::selective::PerTrackReport,
}

pub fn cmd_selective(datasets: &[ModelDataset], ctx: &Context) -> Result<Output> {
    let evals = evaluate_all(datasets, &ctx.config.screen)?;
    let ordered = evaluations_in_report_order(&evals);
    let summaries: Vec<ModelSummary> = ordered.iter().map(|e| ModelSummary::from(*e)).collect();
    let rows: Vec<SelectiveRow> = ordered
        .iter()
        .zip(&summaries)
        .map(|(e, s)| SelectiveRow {
            summary: s.clone(),
            n_correct: e.selective.n_correct,
            n_incorrect: e.selective.n_incorrect,
            curve: &e.selective.curve,
            tracks: &e.tracks,
        })
        .collect();
    let json = ctx.json("models", &rows)?;

    let summary_refs: Vec<&ModelSummary> = summaries.iter().collect();
    let table = selective_table(&summary_refs);
    let labels: Vec<&str> = ctx.config.tracks.labels().collect();
    let track_rows: Vec<_> = ordered.iter().map(|e| (&e.tracks, e.screen.tier.value)).collect();
    let tracks = track_table(&track_rows, &labels);

    let mut out = ctx.table_output("selective_table", &table, "selective.json", json)?;
    if ctx.format != Format::Json {
        let body = match ctx.format {
            Format::Csv => tracks.csv(),
            _ => tracks.markdown(),
        };
        out.files
            .push((format!("track_auroc.{}", ctx.format.extension()), body));
    }
    out.files.extend(figure_csvs(&ordered));
    Ok(out)
}

fn track_observations(evals: &[ModelEvaluation]) -> Vec<TrackObservation> {
    evals
        .iter()
        .flat_map(|e| {
            e.tracks.tracks.iter().filter_map(move |(track, m)| {
                Some(TrackObservation {
                    model: e.screen.model.clone(),
                    tier: e.screen.tier.value,
                    track: track.clone(),
                    r: m.r?,
                    auroc: m.auroc?,
                })
            })
        })
        .collect()
}

pub fn cmd_stats(datasets: &[ModelDataset], ctx: &Context, bootstrap_n: usize) -> Result<Output> {
    let evals = evaluate_all(datasets, &ctx.config.screen)?;
    let rows: Vec<ModelSummary> = evals.iter().map(ModelSummary::from).collect();
    let obs = track_observations(&evals);
    stats_output(&rows, Some(&obs), ctx, bootstrap_n)
}

pub fn cmd_stats_summary(rows: &[ModelSummary], ctx: &Context, bootstrap_n: usize) -> Result<Output> {
    stats_output(rows, None, ctx, bootstrap_n)
}

fn stat_rows(report: &super::CriterionReport) -> Vec<&StatResult> {
    [
        report.tier_auroc_anova.as_ref(),
        report.valid_vs_invalid_auroc_u.as_ref(),
        report
            .valid_vs_invalid_auroc_u_without_extreme
            .as_ref()
            .map(|s| &s.result),
        report.tier_gain70_anova.as_ref(),
        report.valid_vs_invalid_gain70_u.as_ref(),
        report.tier_gain50_anova.as_ref(),
        report.within_valid_l_vs_auroc.as_ref(),
        report.within_valid_l_vs_gain70.as_ref(),
        report.within_valid_r_vs_auroc.as_ref(),
        report.per_track_r_vs_auroc.as_ref(),
        report.per_track_r_vs_auroc_within_valid.as_ref(),
    ]
    .into_iter()
    .flatten()
    .collect()
}

fn stats_output(
    rows: &[ModelSummary],
    tracks: Option<&[TrackObservation]>,
    ctx: &Context,
    bootstrap_n: usize,
) -> Result<Output> {
    let report = criterion_report(rows, tracks, bootstrap_n, ctx.config.screen.seed);
    let mut ordered: Vec<&ModelSummary> = rows.iter().collect();
    report_order(&mut ordered, |s| (s.tier, s.auroc));
    let json = ctx.json("report", &json!({ "models": ordered, "criterion": report }))?;

    let tests = Table {
        header: ["name", "statistic", "p_value", "effect_size", "method", "n_per_group"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows: stat_rows(&report)
            .into_iter()
            .map(|r| {
                vec![
                    r.name.clone(),
                    format!("{:.3}", r.statistic),
                    fmt3(r.p_value),
                    fmt3(r.effect_size),
                    serde_json::to_value(r.method)
                        .ok()
                        .and_then(|v| v.as_str().map(String::from))
                        .unwrap_or_default(),
                    r.n_per_group
                        .iter()
                        .map(|n| n.to_string())
                        .collect::<Vec<_>>()
                        .join("/"),
                ]
            })
            .collect(),
    };
    let mut out = ctx.table_output("criterion_tests", &tests, "stats.json", json)?;
    if ctx.format == Format::Md {
        let mut extra = String::from("\n");
        for (tier, m) in &report.tier_auroc_bootstrap {
            extra.push_str(&format!(
                "- {tier} mean AUROC {:.3} (n = {}), 95% CI [{:.3}, {:.3}]\n",
                m.mean, m.n, m.lower, m.upper
            ));
        }
        if let Some(d) = &report.valid_vs_invalid_auroc_d {
            extra.push_str(&format!("- Cohen's d (Valid vs Invalid AUROC) = {:.3}\n", d.d));
        }
        if let Some(p) = report.monotonicity_probability {
            extra.push_str(&format!("- Bootstrap P(monotonic) = {p:.3}\n"));
        }
        for a in &report.absences {
            extra.push_str(&format!("- absent: {a}\n"));
        }
        out.primary.push_str(&extra);
        if let Some(file) = out.files.iter_mut().find(|(n, _)| n == "criterion_tests.md") {
            file.1.push_str(&extra);
        }
    }
    Ok(out)
}

pub fn cmd_splithalf(datasets: &[ModelDataset], ctx: &Context, splits: usize) -> Result<Output> {
    let seed = ctx.config.screen.seed;
    let result = split_half_cv(datasets, &ctx.config.screen, splits, seed)?;
    let json = ctx.json("result", &result)?;
    let primary = match ctx.format {
        Format::Json => json.clone(),
        Format::Csv => {
            let mut s = String::from("d\n");
            for d in &result.per_split_d {
                s.push_str(&format!("{d}\n"));
            }
            s
        }
        Format::Md => format!(
            "Split-half: {} of {} splits retained\n\n- median d = {:.3}\n- 95% CI [{:.3}, {:.3}]\n- P(d > 0) = {:.3}\n",
            result.n_splits_retained,
            result.n_splits_requested,
            result.median_d,
            result.d_ci.lower,
            result.d_ci.upper,
            result.p_d_positive
        ),
    };
    let mut files = vec![ctx.manifest_file()?, ("splithalf.json".into(), json)];
    if ctx.format != Format::Json {
        files.push((format!("splithalf.{}", ctx.format.extension()), primary.clone()));
    }
    Ok(Output { primary, files })
}

pub fn cmd_synth(spec: &CohortSpec, ctx: &Context) -> Result<Output> {
    let datasets = spec.generate(ctx.config.screen.seed)?;
    let csv = write_dataset(&datasets);
    Ok(Output {
        primary: csv.clone(),
        files: vec![ctx.manifest_file()?, ("synthetic.csv".into(), csv)],
    })
}
