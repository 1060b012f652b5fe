//! k-trees: named families, recognition, extension and enumeration.
//!
//! Named families use a fixed vertex layout: `v_1..v_k` are indices
//! `0..k` (the base clique) and `u_1..u_{n-k}` are indices `k..n`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::canon::{canonical_form, MAX_CANON_ORDER};
use crate::{CanonicalLabel, Error, Graph, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `K_k`.
    Complete,
    /// The k-star `S_{k,n-k}`.
    KStar,
    G1,
    G2,
    G3,
    G4,
    G5,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Complete,
        Family::KStar,
        Family::G1,
        Family::G2,
        Family::G3,
        Family::G4,
        Family::G5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Complete => "complete",
            Family::KStar => "kstar",
            Family::G1 => "g1",
            Family::G2 => "g2",
            Family::G3 => "g3",
            Family::G4 => "g4",
            Family::G5 => "g5",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// A member of one of the named families together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NamedFamily {
    pub family: Family,
    pub n: usize,
    pub k: usize,
}

impl NamedFamily {
    pub fn new(family: Family, n: usize, k: usize) -> Result<Self> {
        let feasible = k >= 1
            && match family {
                Family::Complete => n == k,
                Family::KStar => n >= k,
                Family::G1 => n >= k + 2,
                Family::G2 | Family::G3 => n >= k + 3,
                Family::G4 | Family::G5 => n >= k + 3 && k >= 2,
            };
        if feasible {
            Ok(NamedFamily { family, n, k })
        } else {
            Err(Error::InfeasibleFamily { family, n, k })
        }
    }

    /// Index of `v_i` (1-based `i`).
    pub fn v(&self, i: usize) -> usize {
        debug_assert!((1..=self.k).contains(&i));
        i - 1
    }

    /// Index of `u_j` (1-based `j`).
    pub fn u(&self, j: usize) -> usize {
        debug_assert!((1..=self.n - self.k).contains(&j));
        self.k + j - 1
    }

    pub fn build(&self) -> Graph {
        let (n, k) = (self.n, self.k);
        let star = k_star_unchecked(k, n - k);
        let (v, u) = (|i| self.v(i), |j| self.u(j));
        type Edges<'a> = &'a [(usize, usize)];
        let (remove, add): (Edges, Edges) = match self.family {
            Family::Complete | Family::KStar => return star,
            Family::G1 => (&[(u(1), v(k))], &[(u(1), u(2))]),
            Family::G2 => (&[(u(1), v(k)), (u(3), v(k))], &[(u(1), u(2)), (u(3), u(2))]),
            Family::G3 => (&[(u(1), v(k)), (u(3), v(k))], &[(u(1), u(2)), (u(3), u(1))]),
            Family::G4 => (&[(u(1), v(k)), (u(3), v(1))], &[(u(1), u(2)), (u(3), u(2))]),
            Family::G5 => (
                &[(u(1), v(k)), (u(3), v(k - 1)), (u(3), v(k))],
                &[(u(1), u(2)), (u(3), u(1)), (u(3), u(2))],
            ),
        };
        star.with_edits(remove, add)
            .expect("family edits are valid on the k-star")
    }
}

pub fn make_complete(k: usize) -> Result<Graph> {
    Ok(NamedFamily::new(Family::Complete, k, k)?.build())
}

/// `S_{k,m}`: a base `K_k` plus `m` pairwise non-adjacent vertices joined to all of it.
pub fn make_k_star(k: usize, m: usize) -> Result<Graph> {
    Ok(NamedFamily::new(Family::KStar, k + m, k)?.build())
}

pub fn make_g1(n: usize, k: usize) -> Result<Graph> {
    Ok(NamedFamily::new(Family::G1, n, k)?.build())
}

pub fn make_g2(n: usize, k: usize) -> Result<Graph> {
    Ok(NamedFamily::new(Family::G2, n, k)?.build())
}

pub fn make_g3(n: usize, k: usize) -> Result<Graph> {
    Ok(NamedFamily::new(Family::G3, n, k)?.build())
}

pub fn make_g4(n: usize, k: usize) -> Result<Graph> {
    Ok(NamedFamily::new(Family::G4, n, k)?.build())
}

pub fn make_g5(n: usize, k: usize) -> Result<Graph> {
    Ok(NamedFamily::new(Family::G5, n, k)?.build())
}

fn k_star_unchecked(k: usize, m: usize) -> Graph {
    let mut edges = Vec::with_capacity(k * (k - 1) / 2 + k * m);
    for a in 0..k {
        for b in a + 1..k {
            edges.push((a, b));
        }
    }
    for leaf in k..k + m {
        edges.extend((0..k).map(|a| (a, leaf)));
    }
    Graph::from_edges(k + m, &edges).expect("k-star edges are simple")
}

/// Witness that a graph is a k-tree: removing the recorded vertices in order,
/// each of degree `k` with a clique neighborhood, leaves the `K_k` in `core`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KTreeCertificate {
    pub k: usize,
    /// `(vertex, its k-clique neighborhood at removal time)`, in removal order.
    pub elimination: Vec<(usize, Vec<usize>)>,
    pub core: Vec<usize>,
}

impl KTreeCertificate {
    /// Rebuilds the graph by adjoining eliminated vertices in reverse order.
    pub fn replay(&self, n: usize) -> Result<Graph> {
        let mut edges = Vec::new();
        for (i, &a) in self.core.iter().enumerate() {
            for &b in &self.core[i + 1..] {
                edges.push((a, b));
            }
        }
        let mut present: Vec<bool> = alloc::vec![false; n];
        for &c in &self.core {
            present[c] = true;
        }
        for (v, clique) in self.elimination.iter().rev() {
            if clique.len() != self.k || !clique.iter().all(|&c| present[c]) || present[*v] {
                return Err(Error::NotKTree(self.k));
            }
            edges.extend(clique.iter().map(|&c| (c, *v)));
            present[*v] = true;
        }
        Graph::from_edges(n, &edges)
    }
}

/// Recognizes k-trees by repeatedly deleting the lowest-index vertex of
/// degree `k` whose neighbors form a clique.
pub fn is_k_tree(g: &Graph, k: usize) -> Option<KTreeCertificate> {
    let n = g.n();
    if k == 0 || n < k {
        return None;
    }
    let mut alive = alloc::vec![true; n];
    let mut degree = g.degrees();
    let mut elimination = Vec::with_capacity(n - k);
    let live_neighbors =
        |alive: &[bool], v: usize| -> Vec<usize> { g.neighbors(v).iter().copied().filter(|&w| alive[w]).collect() };
    for _ in 0..n - k {
        let pick = (0..n).find(|&v| {
            alive[v] && degree[v] == k && {
                let around = live_neighbors(&alive, v);
                g.is_clique(&around).unwrap_or(false)
            }
        })?;
        let around = live_neighbors(&alive, pick);
        alive[pick] = false;
        for &w in &around {
            degree[w] -= 1;
        }
        elimination.push((pick, around));
    }
    let core: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    if !g.is_clique(&core).unwrap_or(false) || core.iter().any(|&v| degree[v] != k - 1) {
        return None;
    }
    Some(KTreeCertificate { k, elimination, core })
}

/// All `size`-cliques in lexicographic order.
pub fn cliques(g: &Graph, size: usize) -> Vec<Vec<usize>> {
    fn grow(g: &Graph, size: usize, current: &mut Vec<usize>, candidates: &[usize], out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for (i, &v) in candidates.iter().enumerate() {
            if candidates.len() - i < size - current.len() {
                break;
            }
            let next: Vec<usize> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&w| g.has_edge(v, w))
                .collect();
            current.push(v);
            grow(g, size, current, &next, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    let all: Vec<usize> = (0..g.n()).collect();
    grow(g, size, &mut Vec::with_capacity(size), &all, &mut out);
    out
}

/// Adjoins a new vertex joined to exactly the vertices of `clique`.
pub fn extend(g: &Graph, clique: &[usize]) -> Result<Graph> {
    if !g.is_clique(clique)? {
        return Err(Error::NotAClique);
    }
    g.with_vertex(clique)
}

/// Size limits for exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_order: usize,
    pub max_added: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_order: 14,
            max_added: 9,
        }
    }
}

impl Budget {
    pub fn check(&self, n: usize, k: usize) -> Result<()> {
        if k == 0 || n < k {
            return Err(Error::InvalidParameter(alloc::format!(
                "need n >= k >= 1, got n = {n}, k = {k}"
            )));
        }
        if n > self.max_order.min(MAX_CANON_ORDER) || n - k > self.max_added {
            return Err(Error::BudgetExceeded { n, k });
        }
        Ok(())
    }
}

/// One canonical representative per isomorphism class of k-trees on `n`
/// vertices, sorted by canonical label.
pub fn enumerate_ktrees(n: usize, k: usize) -> Result<Vec<Graph>> {
    enumerate_ktrees_within(n, k, Budget::default())
}

pub fn enumerate_ktrees_within(n: usize, k: usize, budget: Budget) -> Result<Vec<Graph>> {
    Ok(enumerate_labeled(n, k, budget)?.into_values().collect())
}

/// Like [`enumerate_ktrees`] but keeps the canonical labels.
pub fn enumerate_labeled(n: usize, k: usize, budget: Budget) -> Result<BTreeMap<CanonicalLabel, Graph>> {
    budget.check(n, k)?;
    let mut level: BTreeMap<CanonicalLabel, Graph> = BTreeMap::new();
    let base = Graph::complete(k);
    let (label, perm) = canonical_form(&base)?;
    level.insert(label, base.relabel(&perm)?);
    for _ in k..n {
        let mut next = BTreeMap::new();
        for parent in level.values() {
            for clique in cliques(parent, k) {
                let child = parent.with_vertex(&clique)?;
                let (label, perm) = canonical_form(&child)?;
                if let alloc::collections::btree_map::Entry::Vacant(slot) = next.entry(label) {
                    slot.insert(child.relabel(&perm)?);
                }
            }
        }
        level = next;
    }
    Ok(level)
}
