use std::io::{BufRead, Write};

use super::DirectedNetwork;
use crate::error::{Error, Result};

/// Writes one `debtor,creditor` line per edge in canonical order.
pub fn write_edge_list<W: Write>(net: &DirectedNetwork, mut out: W) -> Result<()> {
    for (d, c) in net.edges() {
        writeln!(out, "{d},{c}")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads the format produced by [`write_edge_list`]. Blank lines are skipped.
pub fn read_edge_list<R: BufRead>(n: usize, input: R) -> Result<DirectedNetwork> {
    let mut edges = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parse = |s: Option<&str>| -> Result<usize> {
            s.map(str::trim)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::EdgeListParse {
                    line: idx + 1,
                    message: format!("expected `debtor,creditor`, got `{line}`"),
                })
        };
        let mut fields = line.split(',');
        let d = parse(fields.next())?;
        let c = parse(fields.next())?;
        if fields.next().is_some() {
            return Err(Error::EdgeListParse {
                line: idx + 1,
                message: "too many fields".into(),
            });
        }
        edges.push((d, c));
    }
    DirectedNetwork::from_edges(n, &edges)
}
