//! Graph interchange formats and numeric output.
//!
//! JSON graphs are `{"n": N, "edges": [[u, v], ...]}` with `u < v` and edges
//! sorted. graph6 is the usual bit-packed upper triangle with printable
//! bytes offset by 63, limited here to `n <= 62`.

use std::io::Read;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use kspectra_core::Graph;
use serde::{Deserialize, Serialize};

pub const GRAPH6_MAX_ORDER: usize = 62;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> Self {
        let mut edges: Vec<[usize; 2]> = g.edges().map(|(u, v)| [u.min(v), u.max(v)]).collect();
        edges.sort_unstable();
        GraphJson { n: g.n(), edges }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        Ok(Graph::from_edges(self.n, &edges)?)
    }
}

/// Upper-triangle bit positions in graph6 order: column by column.
fn upper_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j)))
}

pub fn to_graph6(g: &Graph) -> Result<String> {
    let n = g.n();
    ensure!(
        n <= GRAPH6_MAX_ORDER,
        "graph6 output supports n <= {GRAPH6_MAX_ORDER}, got {n}"
    );
    let mut out = String::new();
    out.push((n as u8 + 63) as char);
    let bits: Vec<bool> = upper_pairs(n).map(|(i, j)| g.has_edge(i, j)).collect();
    for chunk in bits.chunks(6) {
        let mut byte = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            if b {
                byte |= 1 << (5 - i);
            }
        }
        out.push((byte + 63) as char);
    }
    Ok(out)
}

pub fn from_graph6(text: &str) -> Result<Graph> {
    let bytes = text.trim().as_bytes();
    let Some((&first, body)) = bytes.split_first() else {
        bail!("empty graph6 string");
    };
    ensure!(
        (63..=63 + GRAPH6_MAX_ORDER as u8).contains(&first),
        "graph6 order byte {first} outside the supported range"
    );
    let n = (first - 63) as usize;
    let bit_count = n * n.saturating_sub(1) / 2;
    ensure!(
        body.len() == bit_count.div_ceil(6),
        "graph6 body has {} bytes, expected {} for n = {n}",
        body.len(),
        bit_count.div_ceil(6)
    );
    let mut bits = Vec::with_capacity(body.len() * 6);
    for &b in body {
        ensure!((63..=126).contains(&b), "invalid graph6 byte {b}");
        let value = b - 63;
        bits.extend((0..6).map(|i| value >> (5 - i) & 1 == 1));
    }
    ensure!(
        bits[bit_count..].iter().all(|&b| !b),
        "graph6 padding bits must be zero"
    );
    let edges: Vec<(usize, usize)> = upper_pairs(n).zip(&bits).filter(|(_, &b)| b).map(|(e, _)| e).collect();
    Ok(Graph::from_edges(n, &edges)?)
}

/// A JSON object when the text starts with `{`, otherwise one graph6 line.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let parsed: GraphJson = serde_json::from_str(trimmed).context("malformed JSON graph")?;
        parsed.to_graph()
    } else {
        let line = trimmed.lines().next().unwrap_or("");
        from_graph6(line)
    }
}

/// Reads a graph from a file, or from stdin when `path` is `-`.
pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?
    };
    parse_graph(&text)
}

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn sig12_all(xs: &[f64]) -> Vec<f64> {
    xs.iter().copied().map(sig12).collect()
}
