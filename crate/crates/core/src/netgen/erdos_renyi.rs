use rand::Rng;

use super::DirectedNetwork;
use crate::error::{Error, Result};

/// Directed Erdős–Rényi graph: every ordered pair `(i, j)`, `i != j`, is an
/// edge independently with probability `z / (n - 1)`.
///
/// Runs in time proportional to the number of edges by jumping over the
/// `n (n - 1)` candidate pairs with geometrically distributed gaps.
pub fn gen_erdos_renyi<R: Rng + ?Sized>(n: usize, z: f64, rng: &mut R) -> Result<DirectedNetwork> {
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    let max = (n - 1) as f64;
    if !(0.0..=max).contains(&z) {
        return Err(Error::MeanDegreeOutOfRange { z, n, max });
    }

    let p = z / max;
    let row = (n - 1) as u64;
    let pairs = n as u64 * row;
    let decode = |idx: u64| {
        let d = idx / row;
        let r = idx % row;
        let c = if r >= d { r + 1 } else { r };
        (d as u32, c as u32)
    };

    let edges: Vec<(u32, u32)> = if p <= 0.0 {
        Vec::new()
    } else if p >= 1.0 {
        (0..pairs).map(decode).collect()
    } else {
        let log_q = (-p).ln_1p();
        let mut edges = Vec::with_capacity((pairs as f64 * p * 1.1) as usize + 16);
        let mut idx: u64 = 0;
        loop {
            let u: f64 = rng.gen();
            let gap = ((-u).ln_1p() / log_q).floor();
            if gap >= (pairs - idx) as f64 {
                break;
            }
            idx += gap as u64;
            edges.push(decode(idx));
            idx += 1;
            if idx >= pairs {
                break;
            }
        }
        edges
    };

    Ok(DirectedNetwork::from_sorted_unique(n, edges))
}
