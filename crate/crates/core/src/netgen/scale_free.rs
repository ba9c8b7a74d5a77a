use rand::seq::SliceRandom;
use rand::Rng;

use super::DirectedNetwork;
use crate::error::{Error, Result};

/// Discrete law `P(k) ∝ (k + shift)^-gamma` on `0..=cutoff`.
///
/// The shift is the single knob used to hit a target mean while the tail
/// exponent stays fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedPowerLaw {
    gamma: f64,
    shift: f64,
    cutoff: usize,
    cdf: Vec<f64>,
}

const SHIFT_MIN: f64 = 1e-9;
const SHIFT_MAX: f64 = 1e9;

impl ShiftedPowerLaw {
    pub fn new(gamma: f64, shift: f64, cutoff: usize) -> Self {
        let weights = Self::weights(gamma, shift, cutoff);
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        Self {
            gamma,
            shift,
            cutoff,
            cdf,
        }
    }

    /// Degree cutoff used for networks of `n` nodes: `floor(sqrt(n))`, never
    /// above `n - 1`.
    pub fn cutoff_for(n: usize) -> usize {
        ((n as f64).sqrt().floor() as usize).min(n.saturating_sub(1))
    }

    /// Solves for the shift (by bisection in log space) that gives mean `z`.
    pub fn with_mean(gamma: f64, z: f64, cutoff: usize) -> Result<Self> {
        if !(gamma > 2.0) {
            return Err(Error::InvalidExponent(gamma));
        }
        let supremum = cutoff as f64 / 2.0;
        let unreachable = Error::UnreachableMeanDegree {
            z,
            cutoff,
            supremum,
        };
        if !(z > 0.0) || cutoff == 0 {
            return Err(unreachable);
        }
        let mean = |s: f64| Self::mean_of(gamma, s, cutoff);
        if z <= mean(SHIFT_MIN) || z >= mean(SHIFT_MAX) {
            return Err(unreachable);
        }
        let (mut lo, mut hi) = (SHIFT_MIN.ln(), SHIFT_MAX.ln());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mean(mid.exp()) < z {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Self::new(gamma, (0.5 * (lo + hi)).exp(), cutoff))
    }

    fn weights(gamma: f64, shift: f64, cutoff: usize) -> Vec<f64> {
        (0..=cutoff)
            .map(|k| ((k as f64 + shift) / shift).powf(-gamma))
            .collect()
    }

    fn mean_of(gamma: f64, shift: f64, cutoff: usize) -> f64 {
        let weights = Self::weights(gamma, shift, cutoff);
        let total: f64 = weights.iter().sum();
        weights
            .iter()
            .enumerate()
            .map(|(k, w)| k as f64 * w)
            .sum::<f64>()
            / total
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn mean(&self) -> f64 {
        Self::mean_of(self.gamma, self.shift, self.cutoff)
    }

    /// `P(k)` for `k` in `0..=cutoff`.
    pub fn pmf(&self, k: usize) -> f64 {
        match k {
            0 => self.cdf[0],
            k if k <= self.cutoff => self.cdf[k] - self.cdf[k - 1],
            _ => 0.0,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.cdf.partition_point(|&c| c <= u).min(self.cutoff)
    }
}

/// Scale-free directed network from the directed configuration model.
///
/// In- and out-degrees are drawn i.i.d. from a [`ShiftedPowerLaw`] tuned to
/// mean `z` with cutoff `floor(sqrt(n))`. The smaller stub total is topped up
/// one stub at a time on uniformly chosen nodes, stubs are matched at random,
/// and self-loops and duplicate edges are deleted.
pub fn gen_scale_free<R: Rng + ?Sized>(
    n: usize,
    gamma: f64,
    z: f64,
    rng: &mut R,
) -> Result<DirectedNetwork> {
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    let law = ShiftedPowerLaw::with_mean(gamma, z, ShiftedPowerLaw::cutoff_for(n))?;
    Ok(configuration_model(n, &law, rng))
}

/// Configuration-model wiring with a pre-tuned degree law; lets sweeps solve
/// for the shift once per grid point.
pub(crate) fn configuration_model<R: Rng + ?Sized>(
    n: usize,
    law: &ShiftedPowerLaw,
    rng: &mut R,
) -> DirectedNetwork {
    let mut out_deg: Vec<usize> = (0..n).map(|_| law.sample(rng)).collect();
    let mut in_deg: Vec<usize> = (0..n).map(|_| law.sample(rng)).collect();

    let out_total: usize = out_deg.iter().sum();
    let in_total: usize = in_deg.iter().sum();
    let (short, deficit) = if out_total < in_total {
        (&mut out_deg, in_total - out_total)
    } else {
        (&mut in_deg, out_total - in_total)
    };
    for _ in 0..deficit {
        short[rng.gen_range(0..n)] += 1;
    }

    let out_stubs: Vec<u32> = stubs(&out_deg);
    let mut in_stubs: Vec<u32> = stubs(&in_deg);
    in_stubs.shuffle(rng);

    let pairs = out_stubs.into_iter().zip(in_stubs).collect();
    DirectedNetwork::from_raw_pairs(n, pairs).0
}

fn stubs(degrees: &[usize]) -> Vec<u32> {
    degrees
        .iter()
        .enumerate()
        .flat_map(|(i, &k)| std::iter::repeat(i as u32).take(k))
        .collect()
}
