use super::DirectedNetwork;
use crate::error::{Error, Result};

/// Pearson correlation of total degree across the endpoints of the
/// undirected projection of the edge set.
///
/// Each connected unordered pair contributes once in both orientations, so
/// the result is symmetric in the endpoints.
pub fn degree_assortativity(net: &DirectedNetwork) -> Result<f64> {
    if net.edge_count() < 2 {
        return Err(Error::TooFewEdges(net.edge_count()));
    }
    let mut pairs: Vec<(usize, usize)> = net.edges().map(|(d, c)| (d.min(c), d.max(c))).collect();
    pairs.sort_unstable();
    pairs.dedup();

    let k = |i: usize| net.total_degree(i) as f64;
    let count = 2.0 * pairs.len() as f64;
    let mean = pairs.iter().map(|&(i, j)| k(i) + k(j)).sum::<f64>() / count;

    let (mut cov, mut var) = (0.0, 0.0);
    for &(i, j) in &pairs {
        let (x, y) = (k(i) - mean, k(j) - mean);
        cov += 2.0 * x * y;
        var += x * x + y * y;
    }
    if var <= f64::EPSILON * count * mean * mean {
        return Err(Error::ZeroVariance);
    }
    Ok((cov / var).clamp(-1.0, 1.0))
}
