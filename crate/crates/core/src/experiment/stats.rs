use serde::Serialize;

use super::trials::{run_trials, GridPointResult, TrialRecord};
use super::ExperimentSpec;
use crate::error::{Error, Result};

/// Position window for the trigger-order statistic, as a fraction of the
/// trial's defaulters.
pub const TRIGGER_WINDOW: f64 = 0.05;

/// Point estimate with its standard error and the sample size behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
    pub count: usize,
}

impl Estimate {
    fn proportion(hits: usize, count: usize) -> Self {
        let p = hits as f64 / count as f64;
        Estimate {
            value: p,
            se: (p * (1.0 - p) / count as f64).sqrt(),
            count,
        }
    }

    fn sample_mean(values: &[f64]) -> Self {
        let m = values.len();
        let mean = values.iter().sum::<f64>() / m as f64;
        let se = if m > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
            (var / m as f64).sqrt()
        } else {
            0.0
        };
        Estimate {
            value: mean,
            se,
            count: m,
        }
    }
}

/// Share of trials in which more than `threshold` of the banks defaulted,
/// with binomial standard error.
pub fn contagion_probability(records: &[TrialRecord], threshold: f64) -> Result<Estimate> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let hits = records.iter().filter(|r| r.fraction_defaulted > threshold).count();
    Ok(Estimate::proportion(hits, records.len()))
}

/// Mean defaulted fraction over trials where at least `threshold` of the
/// banks defaulted; `None` when there are no such trials.
pub fn conditional_extent(records: &[TrialRecord], threshold: f64) -> Result<Option<Estimate>> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let hit: Vec<f64> = records
        .iter()
        .map(|r| r.fraction_defaulted)
        .filter(|&f| f >= threshold)
        .collect();
    Ok((!hit.is_empty()).then(|| Estimate::sample_mean(&hit)))
}

/// Among trials where the most connected bank defaulted without being the
/// seed, the share where it was among the first 5% of that trial's
/// defaulters. `None` when the conditioning set is empty.
pub fn trigger_order_probability(records: &[TrialRecord]) -> Result<Option<Estimate>> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let mut events = 0;
    let mut early = 0;
    for r in records.iter().filter(|r| r.hub.defaulted && !r.hub.was_seed) {
        events += 1;
        let rank = r.hub.order.expect("defaulted bank has an order rank") as f64;
        if rank < TRIGGER_WINDOW * r.defaulted_count as f64 {
            early += 1;
        }
    }
    Ok((events > 0).then(|| Estimate::proportion(early, events)))
}

/// Aggregated statistics of one grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub z: f64,
    pub trials: usize,
    pub contagion: Option<Estimate>,
    pub extent: Option<Estimate>,
    pub contagion_events: usize,
    pub realized_mean_degree: Option<f64>,
    pub assortativity: Option<f64>,
    pub trigger_order: Option<Estimate>,
    pub degree_size_correlation: Option<f64>,
    /// Set when the grid point could not be simulated.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub spec: ExperimentSpec,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn run(spec: &ExperimentSpec) -> Result<Self> {
        Ok(aggregate(spec, &run_trials(spec)?))
    }

    pub fn row_at(&self, z: f64) -> Option<&SweepRow> {
        self.rows.iter().find(|r| (r.z - z).abs() < 1e-9)
    }

    pub fn failed_points(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

fn mean_of(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

pub fn aggregate(spec: &ExperimentSpec, results: &[GridPointResult]) -> SweepTable {
    let rows = results
        .iter()
        .map(|point| match &point.records {
            Err(e) => SweepRow {
                z: point.z,
                trials: 0,
                contagion: None,
                extent: None,
                contagion_events: 0,
                realized_mean_degree: None,
                assortativity: None,
                trigger_order: None,
                degree_size_correlation: None,
                error: Some(e.to_string()),
            },
            Ok(records) => {
                let contagion = contagion_probability(records, spec.threshold).ok();
                SweepRow {
                    z: point.z,
                    trials: records.len(),
                    contagion,
                    extent: conditional_extent(records, spec.threshold).ok().flatten(),
                    contagion_events: records.iter().filter(|r| r.fraction_defaulted > spec.threshold).count(),
                    realized_mean_degree: mean_of(records.iter().map(|r| r.realized_mean_degree)),
                    assortativity: mean_of(records.iter().filter_map(|r| r.assortativity)),
                    trigger_order: trigger_order_probability(records).ok().flatten(),
                    degree_size_correlation: mean_of(records.iter().filter_map(|r| r.degree_size_correlation)),
                    error: None,
                }
            }
        })
        .collect();
    SweepTable {
        spec: spec.clone(),
        rows,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioRow {
    pub z: f64,
    /// `None` where the denominator probability is zero or either side failed.
    pub ratio: Option<Estimate>,
}

/// Per-z ratio of contagion probabilities with first-order error propagation.
pub fn ratio_rows(numerator: &SweepTable, denominator: &SweepTable) -> Vec<RatioRow> {
    numerator
        .rows
        .iter()
        .zip(&denominator.rows)
        .map(|(a, b)| {
            let ratio = match (a.contagion, b.contagion) {
                (Some(a), Some(b)) if b.value > 0.0 => {
                    let value = a.value / b.value;
                    let var = (a.se / b.value).powi(2) + (a.value * b.se / (b.value * b.value)).powi(2);
                    Some(Estimate {
                        value,
                        se: var.sqrt(),
                        count: a.count.min(b.count),
                    })
                }
                _ => None,
            };
            RatioRow { z: a.z, ratio }
        })
        .collect()
}

/// Runs two specs that differ only in policy and returns targeted / random
/// contagion probability per grid point.
pub fn policy_ratio(targeted: &ExperimentSpec, random: &ExperimentSpec) -> Result<Vec<RatioRow>> {
    let mut normalized = random.clone();
    normalized.policy = targeted.policy;
    if &normalized != targeted {
        return Err(Error::MismatchedSpecs(
            "policy_ratio needs specs identical in everything but the policy".into(),
        ));
    }
    let a = SweepTable::run(targeted)?;
    let b = SweepTable::run(random)?;
    Ok(ratio_rows(&a, &b))
}
