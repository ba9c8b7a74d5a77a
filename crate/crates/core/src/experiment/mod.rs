//! Monte Carlo ensembles over network family, sheet scheme, seed protocol
//! and policy, swept over a grid of mean degrees.

mod stats;
mod streams;
mod trials;

pub use stats::{
    aggregate, conditional_extent, contagion_probability, policy_ratio, ratio_rows, trigger_order_probability,
    Estimate, RatioRow, SweepRow, SweepTable,
};
pub use streams::{stream_rng, StreamPurpose};
pub use trials::{pick_seed, run_grid_point, run_trials, GridPointResult, HubTrace, TrialRecord};

use serde::{Deserialize, Serialize};

use crate::balance::{SheetScheme, TargetMode};
use crate::error::{Error, Result};
use crate::netgen::DEFAULT_SWEEPS;

pub const DEFAULT_THRESHOLD: f64 = 0.05;
pub const DEFAULT_POLICY_FRACTION: f64 = 0.05;
pub const DEFAULT_POLICY_BUFFER: f64 = 0.06;
pub const DEFAULT_GAMMA: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NetworkFamily {
    ErdosRenyi,
    ScaleFree { gamma: f64 },
    /// Erdős–Rényi graph passed through Metropolis rewiring.
    Rewired { coupling: f64, sweeps: usize },
}

impl NetworkFamily {
    pub fn rewired(coupling: f64) -> Self {
        NetworkFamily::Rewired {
            coupling,
            sweeps: DEFAULT_SWEEPS,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            NetworkFamily::ErdosRenyi => "er",
            NetworkFamily::ScaleFree { .. } => "sf",
            NetworkFamily::Rewired { .. } => "er-rewired",
        }
    }

    pub fn coupling(&self) -> Option<f64> {
        match *self {
            NetworkFamily::Rewired { coupling, .. } => Some(coupling),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedProtocol {
    Random,
    MostConnected,
    Biggest,
}

impl SeedProtocol {
    pub fn label(&self) -> &'static str {
        match self {
            SeedProtocol::Random => "random",
            SeedProtocol::MostConnected => "most-connected",
            SeedProtocol::Biggest => "biggest",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Policy {
    None,
    /// Raise the buffer of the top `fraction` of banks ranked by `mode`.
    Targeted { mode: TargetMode, fraction: f64, buffer: f64 },
    /// Raise the buffer of a uniformly random `fraction` of banks.
    RandomSet { fraction: f64, buffer: f64 },
}

impl Policy {
    pub fn label(&self) -> &'static str {
        match self {
            Policy::None => "none",
            Policy::Targeted {
                mode: TargetMode::TopDegree,
                ..
            } => "top-degree",
            Policy::Targeted {
                mode: TargetMode::TopAssets,
                ..
            } => "top-assets",
            Policy::Targeted {
                mode: TargetMode::Random,
                ..
            }
            | Policy::RandomSet { .. } => "random",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub nodes: usize,
    pub trials: usize,
    pub family: NetworkFamily,
    pub sheets: SheetScheme,
    pub protocol: SeedProtocol,
    pub policy: Policy,
    pub grid: Vec<f64>,
    pub threshold: f64,
    pub master_seed: u64,
}

impl ExperimentSpec {
    /// Erdős–Rényi, uniform sheets, random seed, no policy, default grid.
    pub fn baseline(nodes: usize, trials: usize, master_seed: u64) -> Self {
        Self {
            nodes,
            trials,
            family: NetworkFamily::ErdosRenyi,
            sheets: SheetScheme::uniform(),
            protocol: SeedProtocol::Random,
            policy: Policy::None,
            grid: default_grid(),
            threshold: DEFAULT_THRESHOLD,
            master_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidExperiment(msg));
        if self.nodes < 2 {
            return bad(format!("nodes must be at least 2, got {}", self.nodes));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return bad(format!("contagion threshold must lie in (0, 1), got {}", self.threshold));
        }
        if self.grid.is_empty() {
            return bad("degree grid is empty".into());
        }
        if let Some(z) = self.grid.iter().find(|z| !z.is_finite() || **z < 0.0) {
            return bad(format!("grid value {z} is not a valid mean degree"));
        }
        self.sheets.validate()?;
        match self.family {
            NetworkFamily::ScaleFree { gamma } if !(gamma > 2.0) => {
                return Err(Error::InvalidExponent(gamma));
            }
            NetworkFamily::Rewired { coupling, sweeps } => {
                if !coupling.is_finite() {
                    return bad(format!("coupling must be finite, got {coupling}"));
                }
                if sweeps == 0 {
                    return Err(Error::ZeroSweeps);
                }
            }
            _ => {}
        }
        match self.policy {
            Policy::None => {}
            Policy::Targeted { fraction, buffer, .. } | Policy::RandomSet { fraction, buffer } => {
                if !(fraction > 0.0 && fraction <= 1.0) {
                    return Err(Error::InvalidFraction(fraction));
                }
                if !(buffer > 0.0) {
                    return Err(Error::InvalidBuffer(buffer));
                }
            }
        }
        Ok(())
    }
}

/// 0.5, 1.0, ..., 12.0
pub fn default_grid() -> Vec<f64> {
    grid_range(0.5, 12.0, 0.5)
}

/// Inclusive arithmetic grid; values are computed as `min + i * step` to
/// avoid accumulated drift.
pub fn grid_range(min: f64, max: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || max < min {
        return vec![min];
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| min + i as f64 * step).collect()
}
