use std::io::Write;

use serde::Serialize;

use super::config::Settings;
use super::presets::Study;
use super::StudyResult;
use crate::balance::SheetVariant;
use crate::experiment::{Estimate, RatioRow, SweepRow};

/// Leading columns consumed by the plotting tool; extra columns follow.
pub const CSV_HEADER: [&str; 22] = [
    "z",
    "protocol",
    "policy",
    "trials",
    "contagion_prob",
    "contagion_se",
    "cond_extent",
    "cond_extent_se",
    "n_contagion_events",
    "realized_mean_degree",
    "assortativity",
    "series",
    "network",
    "sheets",
    "coupling_j",
    "trigger_order_prob",
    "trigger_order_se",
    "trigger_order_events",
    "policy_ratio",
    "policy_ratio_se",
    "degree_size_corr",
    "error",
];

/// Six significant digits, fixed notation; empty for non-finite values.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Rounding can carry into a new leading digit (9.999999 -> 10.00000).
    let carried = s.parse::<f64>().map_or(false, |r| r.abs() >= 10f64.powi(magnitude + 1));
    if carried && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_sig).unwrap_or_default()
}

fn est(e: Option<Estimate>) -> [String; 2] {
    [opt(e.map(|e| e.value)), opt(e.map(|e| e.se))]
}

fn ratio_at(rows: Option<&Vec<RatioRow>>, z: f64) -> Option<Estimate> {
    rows?.iter().find(|r| (r.z - z).abs() < 1e-9)?.ratio
}

/// One row per (series, z), series in study order.
pub fn write_csv<W: Write>(study: &Study, result: &StudyResult, out: W) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for (i, (series, table)) in study.series.iter().zip(&result.tables).enumerate() {
        let spec = &series.spec;
        let sheets = match spec.sheets.variant {
            SheetVariant::Uniform => "uniform",
            SheetVariant::PowerLaw { .. } => "power-law",
        };
        let ratios = result
            .ratios
            .iter()
            .find(|(r, _)| r.numerator == i)
            .map(|(_, rows)| rows);
        for row in &table.rows {
            let SweepRow {
                z,
                trials,
                contagion,
                extent,
                contagion_events,
                realized_mean_degree,
                assortativity,
                trigger_order,
                degree_size_correlation,
                error,
            } = row;
            let [p, p_se] = est(*contagion);
            let [e, e_se] = est(*extent);
            let [t, t_se] = est(*trigger_order);
            let [r, r_se] = est(ratio_at(ratios, *z));
            let failed = error.is_some();
            let record: [String; 22] = [
                format_sig(*z),
                spec.protocol.label().to_string(),
                spec.policy.label().to_string(),
                trials.to_string(),
                p,
                p_se,
                e,
                e_se,
                if failed { String::new() } else { contagion_events.to_string() },
                opt(*realized_mean_degree),
                opt(*assortativity),
                series.label.clone(),
                spec.family.label().to_string(),
                sheets.to_string(),
                opt(spec.family.coupling()),
                t,
                t_se,
                trigger_order.map(|t| t.count.to_string()).unwrap_or_default(),
                r,
                r_se,
                opt(*degree_size_correlation),
                error.clone().unwrap_or_default(),
            ];
            w.write_record(&record)?;
        }
    }
    w.flush()
}

#[derive(Serialize)]
struct JsonSeries<'a> {
    label: &'a str,
    spec: &'a crate::experiment::ExperimentSpec,
    rows: &'a [SweepRow],
    #[serde(skip_serializing_if = "Option::is_none")]
    policy_ratio: Option<&'a [RatioRow]>,
}

#[derive(Serialize)]
struct JsonStudy<'a> {
    study: &'a str,
    series: Vec<JsonSeries<'a>>,
}

pub fn write_json<W: Write>(study: &Study, result: &StudyResult, out: W) -> std::io::Result<()> {
    let doc = JsonStudy {
        study: &study.name,
        series: study
            .series
            .iter()
            .zip(&result.tables)
            .enumerate()
            .map(|(i, (s, table))| JsonSeries {
                label: &s.label,
                spec: &s.spec,
                rows: &table.rows,
                policy_ratio: result
                    .ratios
                    .iter()
                    .find(|(r, _)| r.numerator == i)
                    .map(|(_, rows)| rows.as_slice()),
            })
            .collect(),
    };
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")
}

/// Resolved inputs of a run: the layered settings and the series they
/// expanded to.
#[derive(Debug, Clone, Serialize)]
pub struct RecordedSpec {
    pub settings: Settings,
    pub study: Study,
}

/// Provenance written next to the results.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub spec: RecordedSpec,
    pub master_seed: u64,
    pub version: &'static str,
    pub started_at: String,
    pub duration_seconds: f64,
    pub warnings: Vec<String>,
}
