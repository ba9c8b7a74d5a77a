use rand::Rng;
use serde::Serialize;

use super::DirectedNetwork;
use crate::error::{Error, Result};

/// Proposals per edge used when no sweep count is given.
pub const DEFAULT_SWEEPS: usize = 20;

/// `H(G) = -(J/2) Σ_{(d,c) ∈ E} k_d k_c` with `k` the total degree.
///
/// Low energy means hubs attached to hubs when `J > 0` and hubs attached to
/// low-degree banks when `J < 0`.
pub fn hamiltonian(net: &DirectedNetwork, coupling: f64) -> f64 {
    let degree_product: f64 = net
        .edges()
        .map(|(d, c)| (net.total_degree(d) * net.total_degree(c)) as f64)
        .sum();
    -0.5 * coupling * degree_product
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RewireReport {
    pub proposals: usize,
    pub accepted: usize,
    /// Proposals that would have created a self-loop or duplicate edge.
    pub rejected_invalid: usize,
    pub rejected_metropolis: usize,
    pub initial_energy: f64,
    pub final_energy: f64,
}

/// Metropolis sampling of `exp(-H(G))` over degree-preserving double-edge
/// swaps `(a→b), (c→d) ⇒ (a→d), (c→b)`.
///
/// Every node keeps its in- and out-degree. `coupling < 0` biases toward
/// disassortative mixing, `coupling > 0` toward assortative mixing, and
/// `coupling == 0` is plain degree-preserving randomization.
pub fn rewire_assortativity<R: Rng + ?Sized>(
    net: &DirectedNetwork,
    coupling: f64,
    sweeps: usize,
    rng: &mut R,
) -> Result<(DirectedNetwork, RewireReport)> {
    let m = net.edge_count();
    if m < 2 {
        return Err(Error::TooFewEdges(m));
    }
    if sweeps == 0 {
        return Err(Error::ZeroSweeps);
    }

    let degree: Vec<f64> = (0..net.node_count())
        .map(|i| net.total_degree(i) as f64)
        .collect();
    let mut edges: Vec<(u32, u32)> = net.edges().map(|(d, c)| (d as u32, c as u32)).collect();
    // Out-degrees never change, so creditor lists live in fixed flat slots.
    let offsets: Vec<usize> = (0..=net.node_count())
        .map(|d| if d < net.node_count() { net.out_edge_ids(d).start } else { m })
        .collect();
    let mut creditors: Vec<u32> = edges.iter().map(|&(_, c)| c).collect();

    let initial_energy = hamiltonian(net, coupling);
    let mut energy = initial_energy;
    let mut report = RewireReport {
        proposals: sweeps * m,
        ..Default::default()
    };

    for _ in 0..report.proposals {
        let e1 = rng.gen_range(0..m);
        let mut e2 = rng.gen_range(0..m - 1);
        if e2 >= e1 {
            e2 += 1;
        }
        let (a, b) = edges[e1];
        let (c, d) = edges[e2];
        if a == d || c == b {
            report.rejected_invalid += 1;
            continue;
        }

        let (ka, kb, kc, kd) = (
            degree[a as usize],
            degree[b as usize],
            degree[c as usize],
            degree[d as usize],
        );
        let delta = -0.5 * coupling * (ka * kd + kc * kb - ka * kb - kc * kd);
        if delta > 0.0 && rng.gen::<f64>() >= (-delta).exp() {
            report.rejected_metropolis += 1;
            continue;
        }
        let slots_a = offsets[a as usize]..offsets[a as usize + 1];
        let slots_c = offsets[c as usize]..offsets[c as usize + 1];
        if creditors[slots_a.clone()].contains(&d) || creditors[slots_c.clone()].contains(&b) {
            report.rejected_invalid += 1;
            continue;
        }

        replace(&mut creditors[slots_a], b, d);
        replace(&mut creditors[slots_c], d, b);
        edges[e1] = (a, d);
        edges[e2] = (c, b);
        energy += delta;
        report.accepted += 1;
    }

    edges.sort_unstable();
    let rewired = DirectedNetwork::from_sorted_unique(net.node_count(), edges);
    report.initial_energy = initial_energy;
    report.final_energy = hamiltonian(&rewired, coupling);
    debug_assert!((energy - report.final_energy).abs() <= 1e-6 * (1.0 + report.final_energy.abs()));
    Ok((rewired, report))
}

fn replace(list: &mut [u32], from: u32, to: u32) {
    if let Some(slot) = list.iter_mut().find(|x| **x == from) {
        *slot = to;
    }
}
