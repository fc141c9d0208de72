//! Plot-ready CSV data, one file per figure. Values at full precision;
//! undefined values are empty cells.

use super::ModelEvaluation;

fn cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// (file name, CSV text) for each figure.
pub fn figure_csvs(evals: &[&ModelEvaluation]) -> Vec<(String, String)> {
    let mut auroc = String::from("model,tier,auroc\n");
    let mut gain = String::from("model,tier,gain70\n");
    let mut curves = String::from("model,coverage,accuracy\n");
    let mut l_auroc = String::from("model,L,auroc\n");
    for e in evals {
        let model = &e.screen.model;
        let tier = e.screen.tier.value;
        auroc.push_str(&format!("{model},{tier},{}\n", cell(e.selective.auroc)));
        gain.push_str(&format!("{model},{tier},{}\n", cell(e.selective.gain_at(0.7))));
        for p in &e.selective.curve.points {
            curves.push_str(&format!("{model},{},{}\n", p.coverage, p.accuracy));
        }
        l_auroc.push_str(&format!("{model},{},{}\n", e.screen.indices.l, cell(e.selective.auroc)));
    }
    vec![
        ("fig1_auroc_by_tier.csv".into(), auroc),
        ("fig2_gain70_by_tier.csv".into(), gain),
        ("fig3_risk_coverage.csv".into(), curves),
        ("fig4_l_vs_auroc.csv".into(), l_auroc),
    ]
}
