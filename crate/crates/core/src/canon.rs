//! Canonical labeling for small graphs.
//!
//! Color refinement splits the vertex set into an equitable ordered
//! partition; the remaining non-singleton cells are resolved by
//! individualize-and-refine backtracking. Every leaf of the search tree is a
//! vertex ordering, and the label is the smallest upper-triangle adjacency
//! bitstring over all leaves. Twin vertices (equal neighborhoods apart from
//! each other) are interchangeable by an automorphism fixing the current
//! node, so only one twin per cell is branched on.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Graph, Result};

/// Largest order accepted by the canonical labeler.
pub const MAX_CANON_ORDER: usize = 16;

/// Isomorphism-invariant encoding: the order followed by the minimal
/// adjacency bitstring, most significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalLabel {
    bytes: Vec<u8>,
}

impl CanonicalLabel {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn order(&self) -> usize {
        self.bytes[0] as usize
    }

    pub fn to_hex(&self) -> alloc::string::String {
        use core::fmt::Write;
        let mut out = alloc::string::String::with_capacity(self.bytes.len() * 2);
        for b in &self.bytes {
            let _ = write!(out, "{b:02x}");
        }
        out
    }

    fn from_code(n: usize, code: u128) -> Self {
        let bits = n * n.saturating_sub(1) / 2;
        let len = bits.div_ceil(8);
        let mut bytes = Vec::with_capacity(len + 1);
        bytes.push(n as u8);
        if len > 0 {
            let padded = code << (len * 8 - bits);
            for i in (0..len).rev() {
                bytes.push((padded >> (i * 8)) as u8);
            }
        }
        CanonicalLabel { bytes }
    }
}

pub fn canonical_label(g: &Graph) -> Result<CanonicalLabel> {
    canonical_form(g).map(|(label, _)| label)
}

/// Canonical label together with the permutation taking each vertex to its
/// position in the canonical ordering.
pub fn canonical_form(g: &Graph) -> Result<(CanonicalLabel, Vec<usize>)> {
    let n = g.n();
    if n > MAX_CANON_ORDER {
        return Err(Error::GraphTooLarge {
            n,
            max: MAX_CANON_ORDER,
        });
    }
    let rows: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &w| acc | 1 << w))
        .collect();
    let mut search = Search {
        rows: &rows,
        best: None,
    };
    let mut colors = vec![0u32; n];
    search.refine(&mut colors);
    search.descend(colors);
    let (code, perm) = search.best.unwrap_or((0, Vec::new()));
    Ok((CanonicalLabel::from_code(n, code), perm))
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> Result<bool> {
    if g.n() != h.n() || g.m() != h.m() {
        return Ok(false);
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return Ok(false);
    }
    Ok(canonical_label(g)? == canonical_label(h)?)
}

/// Returns a map `phi` with `g.has_edge(u, v) == h.has_edge(phi[u], phi[v])`.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>> {
    if g.n() != h.n() || g.m() != h.m() {
        return Ok(None);
    }
    let (lg, pg) = canonical_form(g)?;
    let (lh, ph) = canonical_form(h)?;
    if lg != lh {
        return Ok(None);
    }
    let mut inverse_h = vec![0; h.n()];
    for (v, &pos) in ph.iter().enumerate() {
        inverse_h[pos] = v;
    }
    Ok(Some(pg.iter().map(|&pos| inverse_h[pos]).collect()))
}

struct Search<'a> {
    rows: &'a [u32],
    best: Option<(u128, Vec<usize>)>,
}

impl Search<'_> {
    fn n(&self) -> usize {
        self.rows.len()
    }

    /// Refines `colors` to the coarsest equitable partition finer than it.
    /// Colors are ranks of (old color, sorted neighbor colors), so the
    /// result depends only on the isomorphism type of the colored graph.
    fn refine(&self, colors: &mut [u32]) {
        let n = self.n();
        let mut cells = count_cells(colors);
        loop {
            let mut signatures: Vec<(u32, Vec<u32>, usize)> = (0..n)
                .map(|v| {
                    let mut around: Vec<u32> = neighbors(self.rows[v]).map(|w| colors[w]).collect();
                    around.sort_unstable();
                    (colors[v], around, v)
                })
                .collect();
            signatures.sort_unstable();
            let mut rank = 0u32;
            for i in 0..n {
                if i > 0 && (signatures[i].0 != signatures[i - 1].0 || signatures[i].1 != signatures[i - 1].1) {
                    rank += 1;
                }
                colors[signatures[i].2] = rank;
            }
            let next = rank as usize + 1;
            if next == cells {
                break;
            }
            cells = next;
        }
    }

    fn descend(&mut self, colors: Vec<u32>) {
        let n = self.n();
        if count_cells(&colors) == n {
            self.leaf(&colors);
            return;
        }
        // First non-singleton cell in color order.
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = sizes.iter().position(|&s| s > 1).unwrap() as u32;
        let mut tried: Vec<usize> = Vec::new();
        for v in 0..n {
            if colors[v] != target || tried.iter().any(|&t| self.twins(t, v)) {
                continue;
            }
            tried.push(v);
            let mut next: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(w, &c)| 2 * c + u32::from(c == target && w != v))
                .collect();
            self.refine(&mut next);
            self.descend(next);
        }
    }

    fn twins(&self, a: usize, b: usize) -> bool {
        (self.rows[a] & !(1 << b)) == (self.rows[b] & !(1 << a))
    }

    fn leaf(&mut self, colors: &[u32]) {
        let n = self.n();
        let mut order = vec![0usize; n];
        for (v, &c) in colors.iter().enumerate() {
            order[c as usize] = v;
        }
        let mut code: u128 = 0;
        for i in 0..n {
            let row = self.rows[order[i]];
            for &w in &order[i + 1..] {
                code = code << 1 | u128::from(row >> w & 1);
            }
        }
        if self.best.as_ref().is_none_or(|(best, _)| code < *best) {
            self.best = Some((code, colors.iter().map(|&c| c as usize).collect()));
        }
    }
}

fn neighbors(row: u32) -> impl Iterator<Item = usize> {
    let mut bits = row;
    core::iter::from_fn(move || {
        if bits == 0 {
            return None;
        }
        let w = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        Some(w)
    })
}

fn count_cells(colors: &[u32]) -> usize {
    let mut seen: Vec<u32> = colors.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}
