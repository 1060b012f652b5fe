//! Structural statistics of k-trees.
//!
//! `S_1(G)` is the set of k-simplicial vertices (degree `k`, clique
//! neighborhood). For a k-clique `C`, `l_G(C)` counts the vertices `w` of
//! degree `k` with `C + w` a (k+1)-clique, and `l(G)` is the maximum of
//! `l_G(C)` over all k-cliques.

use alloc::vec::Vec;

use crate::canon::is_isomorphic;
use crate::ktree::{cliques, is_k_tree, Family, NamedFamily};
use crate::{Error, Graph, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureProfile {
    pub k: usize,
    pub simplicial_set: Vec<usize>,
    pub l_value: usize,
    pub witness_clique: Vec<usize>,
}

pub fn profile(g: &Graph, k: usize) -> Result<StructureProfile> {
    let (l_value, witness_clique) = l_max(g, k)?;
    Ok(StructureProfile {
        k,
        simplicial_set: simplicial_vertices(g, k),
        l_value,
        witness_clique,
    })
}

pub fn is_simplicial(g: &Graph, k: usize, v: usize) -> bool {
    g.degree(v) == k && g.is_clique(g.neighbors(v)).unwrap_or(false)
}

pub fn simplicial_vertices(g: &Graph, k: usize) -> Vec<usize> {
    (0..g.n()).filter(|&v| is_simplicial(g, k, v)).collect()
}

/// Vertices outside `clique` of degree `|clique|` adjacent to all of it,
/// i.e. the apexes of the (k+1)-cliques with property `P_G(clique)`.
pub fn property_vertices(g: &Graph, clique: &[usize]) -> Result<Vec<usize>> {
    if !g.is_clique(clique)? {
        return Err(Error::NotAClique);
    }
    let k = clique.len();
    Ok((0..g.n())
        .filter(|w| !clique.contains(w))
        .filter(|&w| g.degree(w) == k && clique.iter().all(|&c| g.has_edge(c, w)))
        .collect())
}

pub fn l_local(g: &Graph, clique: &[usize]) -> Result<usize> {
    property_vertices(g, clique).map(|w| w.len())
}

/// `l(G)` together with the lexicographically least k-clique attaining it.
pub fn l_max(g: &Graph, k: usize) -> Result<(usize, Vec<usize>)> {
    let mut best: Option<(usize, Vec<usize>)> = None;
    for clique in cliques(g, k) {
        let count = l_local(g, &clique)?;
        if best.as_ref().is_none_or(|(b, _)| count > *b) {
            best = Some((count, clique));
        }
    }
    best.ok_or(Error::NoClique(k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Fact {
    /// `S_1` is empty only for `K_k`, is all of `K_{k+1}`, and for
    /// `n >= k+2` has at least two elements and is independent.
    SimplicialSet,
    /// Deleting a simplicial vertex leaves a k-tree.
    Deletion,
    /// `|S_1| = n-k` exactly for the k-star.
    StarCount,
    /// `l = n-k-3` exactly for `G_2..G_5`.
    FamilyL,
    /// `|S_1|` of `G_2..G_5`.
    FamilyCount,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactCheck {
    pub fact: Fact,
    pub clause: &'static str,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FactReport {
    pub checks: Vec<FactCheck>,
}

impl FactReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    fn push(&mut self, fact: Fact, clause: &'static str, holds: bool) {
        self.checks.push(FactCheck { fact, clause, holds });
    }
}

/// Smallest order at which the `l = n-k-3` characterization of `G_2..G_5`
/// and their `|S_1|` counts hold. At this order `G_2` coincides with `G_1`
/// and is left out of the characterization.
pub fn family_facts_min_order(k: usize) -> usize {
    k + 4
}

/// Checks every fact clause that applies to the k-tree `g`.
pub fn check_facts(g: &Graph, k: usize) -> Result<FactReport> {
    if is_k_tree(g, k).is_none() {
        return Err(Error::NotKTree(k));
    }
    let n = g.n();
    let s1 = simplicial_vertices(g, k);
    let mut report = FactReport::default();

    report.push(Fact::SimplicialSet, "S_1 empty iff n = k", s1.is_empty() == (n == k));
    if n == k + 1 {
        report.push(
            Fact::SimplicialSet,
            "every vertex of K_{k+1} is simplicial",
            s1.len() == n,
        );
    }
    if n >= k + 2 {
        report.push(Fact::SimplicialSet, "|S_1| >= 2", s1.len() >= 2);
        let independent = s1
            .iter()
            .enumerate()
            .all(|(i, &a)| s1[i + 1..].iter().all(|&b| !g.has_edge(a, b)));
        report.push(Fact::SimplicialSet, "S_1 independent", independent);
        let deletions_ok = s1.iter().all(|&v| {
            let rest: Vec<usize> = (0..n).filter(|&w| w != v).collect();
            g.degree(v) == k && is_k_tree(&g.induced_subgraph(&rest).expect("in range"), k).is_some()
        });
        report.push(Fact::Deletion, "G - v is a k-tree for v in S_1", deletions_ok);
    }
    if n >= k + 2 {
        let star = NamedFamily::new(Family::KStar, n, k)?.build();
        report.push(
            Fact::StarCount,
            "|S_1| = n-k iff G is the k-star",
            (s1.len() == n - k) == is_isomorphic(g, &star)?,
        );
    }
    if n >= family_facts_min_order(k) {
        let (l, _) = l_max(g, k)?;
        let g1 = NamedFamily::new(Family::G1, n, k)?.build();
        let mut in_family = false;
        for family in [Family::G2, Family::G3, Family::G4, Family::G5] {
            if let Ok(f) = NamedFamily::new(family, n, k) {
                let h = f.build();
                in_family |= !is_isomorphic(&h, &g1)? && is_isomorphic(g, &h)?;
            }
        }
        report.push(
            Fact::FamilyL,
            "l = n-k-3 iff G is one of G_2..G_5 other than G_1",
            (l == n - k - 3) == in_family,
        );
        for (family, expected) in [
            (Family::G2, n - k - 1),
            (Family::G3, n - k - 2),
            (Family::G4, n - k - 1),
            (Family::G5, n - k - 2),
        ] {
            if let Ok(f) = NamedFamily::new(family, n, k) {
                if is_isomorphic(g, &f.build())? {
                    report.push(Fact::FamilyCount, "|S_1| of G_2..G_5", s1.len() == expected);
                }
            }
        }
    }
    Ok(report)
}
