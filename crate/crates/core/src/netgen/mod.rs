//! Directed interbank networks and their generators.
//!
//! An edge `(d, c)` means creditor `c` holds a claim on debtor `d`: the
//! in-edges of a bank are its interbank assets, the out-edges its
//! interbank liabilities. Every module in the crate shares this convention.

mod assortativity;
mod edgelist;
mod erdos_renyi;
mod rewire;
pub(crate) mod scale_free;

pub use assortativity::degree_assortativity;
pub use edgelist::{read_edge_list, write_edge_list};
pub use erdos_renyi::gen_erdos_renyi;
pub use rewire::{hamiltonian, rewire_assortativity, RewireReport, DEFAULT_SWEEPS};
pub use scale_free::{gen_scale_free, ShiftedPowerLaw};

use serde::Serialize;

use crate::error::{Error, Result};

/// Simple directed graph stored as two compressed adjacency arrays.
///
/// Edges are kept in canonical `(debtor, creditor)` lexicographic order and
/// an edge's position in that order is its *edge id*. Per-edge data (such as
/// exposure weights) is indexed by edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedNetwork {
    n: usize,
    out_offsets: Vec<usize>,
    creditors: Vec<u32>,
    debtors: Vec<u32>,
    in_offsets: Vec<usize>,
    in_edge_ids: Vec<u32>,
}

impl DirectedNetwork {
    /// Builds a network from an arbitrary edge list, rejecting self-loops,
    /// duplicates and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut packed = Vec::with_capacity(edges.len());
        for &(d, c) in edges {
            if d >= n || c >= n {
                return Err(Error::InvalidEdge {
                    debtor: d,
                    creditor: c,
                    reason: "endpoint out of range",
                });
            }
            if d == c {
                return Err(Error::InvalidEdge {
                    debtor: d,
                    creditor: c,
                    reason: "self-loop",
                });
            }
            packed.push((d as u32, c as u32));
        }
        packed.sort_unstable();
        if let Some(w) = packed.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidEdge {
                debtor: w[0].0 as usize,
                creditor: w[0].1 as usize,
                reason: "duplicate edge",
            });
        }
        Ok(Self::from_sorted_unique(n, packed))
    }

    /// `edges` must be sorted, duplicate free, loop free and in range.
    pub(crate) fn from_sorted_unique(n: usize, edges: Vec<(u32, u32)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|&(d, c)| d != c && (d as usize) < n && (c as usize) < n));

        let m = edges.len();
        let mut out_offsets = vec![0usize; n + 1];
        let mut in_offsets = vec![0usize; n + 1];
        for &(d, c) in &edges {
            out_offsets[d as usize + 1] += 1;
            in_offsets[c as usize + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
            in_offsets[i + 1] += in_offsets[i];
        }

        let mut creditors = Vec::with_capacity(m);
        let mut debtors = Vec::with_capacity(m);
        let mut cursor = in_offsets.clone();
        let mut in_edge_ids = vec![0u32; m];
        for (id, &(d, c)) in edges.iter().enumerate() {
            debtors.push(d);
            creditors.push(c);
            let slot = &mut cursor[c as usize];
            in_edge_ids[*slot] = id as u32;
            *slot += 1;
        }

        Self {
            n,
            out_offsets,
            creditors,
            debtors,
            in_offsets,
            in_edge_ids,
        }
    }

    /// Sorts and deduplicates raw pairs, dropping self-loops. Returns the
    /// network and the number of discarded pairs.
    pub(crate) fn from_raw_pairs(n: usize, mut pairs: Vec<(u32, u32)>) -> (Self, usize) {
        let before = pairs.len();
        pairs.retain(|&(d, c)| d != c);
        pairs.sort_unstable();
        pairs.dedup();
        let dropped = before - pairs.len();
        (Self::from_sorted_unique(n, pairs), dropped)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.creditors.len()
    }

    /// Edges in canonical order; the iterator position is the edge id.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.debtors
            .iter()
            .zip(&self.creditors)
            .map(|(&d, &c)| (d as usize, c as usize))
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        (self.debtors[id] as usize, self.creditors[id] as usize)
    }

    /// Creditors of `debtor`, ascending.
    pub fn out_neighbors(&self, debtor: usize) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.creditors[self.out_offsets[debtor]..self.out_offsets[debtor + 1]]
            .iter()
            .map(|&c| c as usize)
    }

    /// Edge ids of the out-edges of `debtor`; contiguous in canonical order.
    pub fn out_edge_ids(&self, debtor: usize) -> std::ops::Range<usize> {
        self.out_offsets[debtor]..self.out_offsets[debtor + 1]
    }

    /// Debtors of `creditor`, ascending.
    pub fn in_neighbors(&self, creditor: usize) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.in_edge_ids(creditor)
            .iter()
            .map(|&id| self.debtors[id as usize] as usize)
    }

    /// Edge ids of the in-edges of `creditor`, ordered by debtor.
    pub fn in_edge_ids(&self, creditor: usize) -> &[u32] {
        &self.in_edge_ids[self.in_offsets[creditor]..self.in_offsets[creditor + 1]]
    }

    pub fn in_degree(&self, bank: usize) -> usize {
        self.in_offsets[bank + 1] - self.in_offsets[bank]
    }

    pub fn out_degree(&self, bank: usize) -> usize {
        self.out_offsets[bank + 1] - self.out_offsets[bank]
    }

    pub fn total_degree(&self, bank: usize) -> usize {
        self.in_degree(bank) + self.out_degree(bank)
    }

    pub fn has_edge(&self, debtor: usize, creditor: usize) -> bool {
        if debtor >= self.n {
            return false;
        }
        let range = self.out_edge_ids(debtor);
        self.creditors[range]
            .binary_search(&(creditor as u32))
            .is_ok()
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let in_degree: Vec<usize> = (0..self.n).map(|i| self.in_degree(i)).collect();
        let out_degree: Vec<usize> = (0..self.n).map(|i| self.out_degree(i)).collect();
        let total_degree = in_degree.iter().zip(&out_degree).map(|(a, b)| a + b).collect();
        let mean_degree = if self.n == 0 {
            0.0
        } else {
            self.edge_count() as f64 / self.n as f64
        };
        DegreeProfile {
            in_degree,
            out_degree,
            total_degree,
            mean_degree,
        }
    }

    /// Bank of highest total degree, lowest index on ties.
    pub fn most_connected(&self) -> Option<usize> {
        (0..self.n).max_by(|&a, &b| {
            self.total_degree(a)
                .cmp(&self.total_degree(b))
                .then_with(|| b.cmp(&a))
        })
    }
}

/// Degree sequences of a network. `mean_degree` is edges per node, i.e. the
/// mean in-degree (equivalently the mean out-degree).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeProfile {
    pub in_degree: Vec<usize>,
    pub out_degree: Vec<usize>,
    pub total_degree: Vec<usize>,
    pub mean_degree: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(matches!(
            DirectedNetwork::from_edges(3, &[(1, 1)]),
            Err(Error::InvalidEdge { reason: "self-loop", .. })
        ));
        assert!(matches!(
            DirectedNetwork::from_edges(3, &[(0, 1), (2, 0), (0, 1)]),
            Err(Error::InvalidEdge { reason: "duplicate edge", .. })
        ));
        assert!(DirectedNetwork::from_edges(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn adjacency_matches_edge_set() {
        let net = DirectedNetwork::from_edges(4, &[(2, 0), (0, 1), (3, 0), (0, 2), (1, 0)]).unwrap();
        let edges: Vec<_> = net.edges().collect();
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 0), (2, 0), (3, 0)]);
        assert_eq!(net.out_neighbors(0).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(net.in_neighbors(0).collect::<Vec<_>>(), vec![1, 2, 3]);
        for c in 0..4 {
            for &id in net.in_edge_ids(c) {
                assert_eq!(net.edge(id as usize).1, c);
            }
        }
        assert!(net.has_edge(3, 0));
        assert!(!net.has_edge(0, 3));

        let profile = net.degree_profile();
        assert_eq!(profile.in_degree.iter().sum::<usize>(), 5);
        assert_eq!(profile.out_degree.iter().sum::<usize>(), 5);
        assert_eq!(profile.mean_degree, 1.25);
        assert_eq!(net.most_connected(), Some(0));
    }

    #[test]
    fn raw_pairs_drop_loops_and_duplicates() {
        let (net, dropped) = DirectedNetwork::from_raw_pairs(3, vec![(0, 1), (1, 1), (0, 1), (2, 1)]);
        assert_eq!(dropped, 2);
        assert_eq!(net.edge_count(), 2);
    }
}
