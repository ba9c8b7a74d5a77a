//! Shared helpers for integration tests: a deliberately naive cascade
//! oracle and generators of small test instances.
#![allow(dead_code)]

use contagion_core::balance::{assign_sheets, BalanceSheetSet, SheetScheme};
use contagion_core::netgen::{gen_erdos_renyi, DirectedNetwork};
use rand::seq::SliceRandom;
use rand::Rng;

/// Result of the brute-force cascade.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    pub round: Vec<Option<u32>>,
    pub order: Vec<Option<u32>>,
    pub rounds: u32,
}

/// Exposure of creditor `c` to debtor `d`, recomputed from total assets:
/// the creditor's interbank assets split across its debtors in proportion
/// to their size.
pub fn naive_exposure(net: &DirectedNetwork, sheets: &BalanceSheetSet, d: usize, c: usize) -> f64 {
    let ta = sheets.total_assets();
    let debtor_mass: f64 = net.edges().filter(|&(_, cc)| cc == c).map(|(dd, _)| ta[dd]).sum();
    sheets.interbank_assets()[c] * ta[d] / debtor_mass
}

/// Synchronous fixed-point iteration that recomputes every surviving
/// bank's loss from scratch each round.
pub fn brute_force(net: &DirectedNetwork, sheets: &BalanceSheetSet, seed: usize) -> OracleOutcome {
    let n = net.node_count();
    let edges: Vec<(usize, usize, f64)> = net
        .edges()
        .map(|(d, c)| (d, c, naive_exposure(net, sheets, d, c)))
        .collect();
    let capital = sheets.capital();

    let mut round = vec![None; n];
    let mut order = vec![None; n];
    round[seed] = Some(0);
    order[seed] = Some(0);
    let mut rank = 1;
    let mut r = 0;
    loop {
        let mut newly = Vec::new();
        for bank in 0..n {
            if round[bank].is_some() {
                continue;
            }
            let loss: f64 = edges
                .iter()
                .filter(|&&(d, c, _)| c == bank && round[d].is_some())
                .map(|&(_, _, w)| w)
                .sum();
            if loss >= capital[bank] * (1.0 - 1e-9) {
                newly.push(bank);
            }
        }
        if newly.is_empty() {
            break;
        }
        r += 1;
        for bank in newly {
            round[bank] = Some(r);
            order[bank] = Some(rank);
            rank += 1;
        }
    }
    OracleOutcome {
        round,
        order,
        rounds: r,
    }
}

/// Loss of every bank given the defaulted set.
pub fn losses(net: &DirectedNetwork, sheets: &BalanceSheetSet, defaulted: &[bool]) -> Vec<f64> {
    let mut loss = vec![0.0; net.node_count()];
    for (id, (d, c)) in net.edges().enumerate() {
        if defaulted[d] {
            loss[c] += sheets.exposure(id);
        }
    }
    loss
}

/// Random network on at most 10 banks drawn from a mix of topologies.
pub fn small_network<R: Rng>(rng: &mut R) -> DirectedNetwork {
    let n = rng.gen_range(2..=10);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    match rng.gen_range(0..5) {
        0 => {
            let z = rng.gen_range(0.0..=(n - 1) as f64);
            return gen_erdos_renyi(n, z, rng).unwrap();
        }
        1 => {
            // Star with each spoke present in a random subset of directions.
            for leaf in 1..n {
                if rng.gen_bool(0.7) {
                    edges.push((0, leaf));
                }
                if rng.gen_bool(0.7) {
                    edges.push((leaf, 0));
                }
            }
        }
        2 => {
            // Directed ring or chain.
            let closed = rng.gen_bool(0.5);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            for w in perm.windows(2) {
                edges.push((w[0], w[1]));
            }
            if closed && n > 2 {
                edges.push((perm[n - 1], perm[0]));
            }
        }
        3 => {
            for d in 0..n {
                for c in 0..n {
                    if d != c {
                        edges.push((d, c));
                    }
                }
            }
        }
        _ => {
            // Banks that each lend to a handful of others (many in-degree ties).
            for c in 0..n {
                let k = rng.gen_range(0..n);
                let mut others: Vec<usize> = (0..n).filter(|&d| d != c).collect();
                others.shuffle(rng);
                edges.extend(others.into_iter().take(k).map(|d| (d, c)));
            }
        }
    }
    DirectedNetwork::from_edges(n, &edges).unwrap()
}

/// Random small instance: network, sheets (uniform or power-law), seed.
pub fn small_instance<R: Rng>(rng: &mut R) -> (DirectedNetwork, BalanceSheetSet, usize) {
    let net = small_network(rng);
    let scheme = if rng.gen_bool(0.5) {
        SheetScheme::uniform()
    } else {
        SheetScheme::power_law(rng.gen_range(2.1..4.0))
    };
    let sheets = assign_sheets(&net, &scheme, rng).unwrap();
    let seed = rng.gen_range(0..net.node_count());
    (net, sheets, seed)
}

/// Bank 0 lends to banks 1..=k and nothing else. Returns the network, the
/// creditor and the debtor used as seed.
pub fn creditor_with_debtors(k: usize) -> (DirectedNetwork, usize, usize) {
    let edges: Vec<(usize, usize)> = (1..=k).map(|d| (d, 0)).collect();
    (DirectedNetwork::from_edges(k + 1, &edges).unwrap(), 0, 1)
}
