use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::streams::{stream_rng, StreamPurpose};
use super::{ExperimentSpec, NetworkFamily, Policy, SeedProtocol};
use crate::balance::{apply_policy, assign_sheets, select_targets, BalanceSheetSet, SheetVariant, TargetMode};
use crate::cascade::run_cascade;
use crate::error::{Error, Result};
use crate::netgen::scale_free::configuration_model;
use crate::netgen::{
    degree_assortativity, gen_erdos_renyi, rewire_assortativity, DirectedNetwork, ShiftedPowerLaw,
};

/// Where the most connected bank ended up in one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HubTrace {
    pub bank: usize,
    pub was_seed: bool,
    pub defaulted: bool,
    /// Rank among defaulters (0 is the seed).
    pub order: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub realized_mean_degree: f64,
    pub seed_bank: usize,
    pub defaulted_count: usize,
    pub fraction_defaulted: f64,
    /// `fraction_defaulted > threshold`.
    pub contagion: bool,
    pub hub: HubTrace,
    pub assortativity: Option<f64>,
    /// Pearson correlation of total assets and total degree across banks;
    /// only for power-law sheets.
    pub degree_size_correlation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPointResult {
    pub z: f64,
    pub records: Result<Vec<TrialRecord>>,
}

/// Chooses the initially failing bank. Deterministic protocols break ties
/// toward the lowest index.
pub fn pick_seed<R: Rng + ?Sized>(
    net: &DirectedNetwork,
    sheets: &BalanceSheetSet,
    protocol: SeedProtocol,
    rng: &mut R,
) -> usize {
    let n = net.node_count();
    match protocol {
        SeedProtocol::Random => rng.gen_range(0..n),
        SeedProtocol::MostConnected => net.most_connected().unwrap_or(0),
        SeedProtocol::Biggest => {
            let ta = sheets.total_assets();
            (0..n)
                .max_by(|&a, &b| ta[a].total_cmp(&ta[b]).then_with(|| b.cmp(&a)))
                .unwrap_or(0)
        }
    }
}

enum Generator {
    ErdosRenyi,
    ScaleFree(ShiftedPowerLaw),
}

impl Generator {
    fn prepare(spec: &ExperimentSpec, z: f64) -> Result<Self> {
        let n = spec.nodes;
        match spec.family {
            NetworkFamily::ErdosRenyi | NetworkFamily::Rewired { .. } => {
                let max = (n - 1) as f64;
                if !(0.0..=max).contains(&z) {
                    return Err(Error::MeanDegreeOutOfRange { z, n, max });
                }
                Ok(Generator::ErdosRenyi)
            }
            NetworkFamily::ScaleFree { gamma } => Ok(Generator::ScaleFree(ShiftedPowerLaw::with_mean(
                gamma,
                z,
                ShiftedPowerLaw::cutoff_for(n),
            )?)),
        }
    }
}

/// Runs every trial of every grid point. A grid point whose parameters are
/// infeasible yields an error for that point only.
///
/// Each trial draws from its own counter-derived streams, so the result is a
/// pure function of `spec` whatever the thread pool.
pub fn run_trials(spec: &ExperimentSpec) -> Result<Vec<GridPointResult>> {
    spec.validate()?;
    Ok(spec
        .grid
        .iter()
        .enumerate()
        .map(|(gi, &z)| GridPointResult {
            z,
            records: run_grid_point(spec, gi, z),
        })
        .collect())
}

pub fn run_grid_point(spec: &ExperimentSpec, grid_index: usize, z: f64) -> Result<Vec<TrialRecord>> {
    let generator = Generator::prepare(spec, z)?;
    (0..spec.trials)
        .into_par_iter()
        .map(|t| run_one(spec, &generator, grid_index, z, t))
        .collect()
}

fn run_one(
    spec: &ExperimentSpec,
    generator: &Generator,
    grid_index: usize,
    z: f64,
    trial: usize,
) -> Result<TrialRecord> {
    let rng = |purpose| stream_rng(spec.master_seed, grid_index, trial, purpose);

    let mut net = match generator {
        Generator::ErdosRenyi => gen_erdos_renyi(spec.nodes, z, &mut rng(StreamPurpose::Network))?,
        Generator::ScaleFree(law) => configuration_model(spec.nodes, law, &mut rng(StreamPurpose::Network)),
    };
    if let NetworkFamily::Rewired { coupling, sweeps } = spec.family {
        if net.edge_count() >= 2 {
            net = rewire_assortativity(&net, coupling, sweeps, &mut rng(StreamPurpose::Rewire))?.0;
        }
    }

    let mut sheets = assign_sheets(&net, &spec.sheets, &mut rng(StreamPurpose::Sheets))?;
    match spec.policy {
        Policy::None => {}
        Policy::Targeted { mode, fraction, buffer } => {
            let targets = select_targets(&net, &sheets, mode, fraction, &mut rng(StreamPurpose::Policy))?;
            sheets = apply_policy(&sheets, &targets, buffer)?;
        }
        Policy::RandomSet { fraction, buffer } => {
            let targets = select_targets(
                &net,
                &sheets,
                TargetMode::Random,
                fraction,
                &mut rng(StreamPurpose::Policy),
            )?;
            sheets = apply_policy(&sheets, &targets, buffer)?;
        }
    }

    let seed_bank = pick_seed(&net, &sheets, spec.protocol, &mut rng(StreamPurpose::Seed));
    let outcome = run_cascade(&net, &sheets, seed_bank)?;

    let hub_bank = net.most_connected().unwrap_or(0);
    let hub = HubTrace {
        bank: hub_bank,
        was_seed: hub_bank == seed_bank,
        defaulted: outcome.defaulted[hub_bank],
        order: outcome.order[hub_bank],
    };
    let degree_size_correlation = match spec.sheets.variant {
        SheetVariant::PowerLaw { .. } => degree_size_correlation(&net, &sheets),
        SheetVariant::Uniform => None,
    };

    Ok(TrialRecord {
        realized_mean_degree: net.edge_count() as f64 / net.node_count() as f64,
        seed_bank,
        defaulted_count: outcome.defaulted_count,
        fraction_defaulted: outcome.fraction_defaulted,
        contagion: outcome.fraction_defaulted > spec.threshold,
        hub,
        assortativity: degree_assortativity(&net).ok(),
        degree_size_correlation,
    })
}

fn degree_size_correlation(net: &DirectedNetwork, sheets: &BalanceSheetSet) -> Option<f64> {
    let n = net.node_count() as f64;
    let ta = sheets.total_assets();
    let deg: Vec<f64> = (0..net.node_count()).map(|i| net.total_degree(i) as f64).collect();
    let mx = ta.iter().sum::<f64>() / n;
    let my = deg.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in ta.iter().zip(&deg) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}
