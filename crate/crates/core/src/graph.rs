//! Simple undirected graphs on dense vertex indices `0..n`.
//!
//! A [`Graph`] is a value: every edit returns a new graph and leaves the
//! receiver untouched. Neighbor lists are kept sorted, which makes edge
//! lookups a binary search and keeps iteration order deterministic.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let adjacency = (0..n).map(|v| (0..n).filter(|&w| w != v).collect()).collect();
        Graph { adjacency }
    }

    /// Builds a graph from an edge list. Rejects loops, repeated edges and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            check_pair(n, u, v)?;
            if adjacency[u].contains(&v) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph { adjacency })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn add_edge(&self, u: usize, v: usize) -> Result<Graph> {
        check_pair(self.n(), u, v)?;
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
        }
        let mut next = self.clone();
        next.insert(u, v);
        Ok(next)
    }

    pub fn remove_edge(&self, u: usize, v: usize) -> Result<Graph> {
        check_pair(self.n(), u, v)?;
        if !self.has_edge(u, v) {
            return Err(Error::MissingEdge(u.min(v), u.max(v)));
        }
        let mut next = self.clone();
        next.delete(u, v);
        Ok(next)
    }

    /// Applies a batch of deletions followed by a batch of insertions.
    pub fn with_edits(&self, remove: &[(usize, usize)], add: &[(usize, usize)]) -> Result<Graph> {
        let mut next = self.clone();
        for &(u, v) in remove {
            check_pair(next.n(), u, v)?;
            if !next.has_edge(u, v) {
                return Err(Error::MissingEdge(u.min(v), u.max(v)));
            }
            next.delete(u, v);
        }
        for &(u, v) in add {
            check_pair(next.n(), u, v)?;
            if next.has_edge(u, v) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            next.insert(u, v);
        }
        Ok(next)
    }

    /// Adds a new vertex `n` joined to every vertex of `attach`.
    pub fn with_vertex(&self, attach: &[usize]) -> Result<Graph> {
        let n = self.n();
        let mut next = self.clone();
        next.adjacency.push(Vec::new());
        for &v in attach {
            check_pair(n + 1, v, n)?;
            if next.has_edge(v, n) {
                return Err(Error::DuplicateEdge(v, n));
            }
            next.insert(v, n);
        }
        Ok(next)
    }

    pub fn is_clique(&self, set: &[usize]) -> Result<bool> {
        self.check_vertices(set)?;
        Ok(set
            .iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v))))
    }

    pub fn is_connected(&self) -> Result<bool> {
        let n = self.n();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        Ok(reached == n)
    }

    /// Subgraph induced by `set`, relabeled by the sorted order of `set`.
    pub fn induced_subgraph(&self, set: &[usize]) -> Result<Graph> {
        self.check_vertices(set)?;
        let mut keep: Vec<usize> = set.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let adjacency = keep
            .iter()
            .map(|&v| {
                self.adjacency[v]
                    .iter()
                    .filter_map(|&w| (index[w] != usize::MAX).then_some(index[w]))
                    .collect()
            })
            .collect();
        Ok(Graph { adjacency })
    }

    /// Relabels vertex `v` as `perm[v]`. `perm` must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        let n = self.n();
        if perm.len() != n {
            return Err(Error::InvalidParameter(alloc::format!(
                "permutation of length {} for graph of order {n}",
                perm.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
            seen[p] = true;
        }
        let mut adjacency = vec![Vec::new(); n];
        for (v, list) in self.adjacency.iter().enumerate() {
            adjacency[perm[v]] = list.iter().map(|&w| perm[w]).collect();
            adjacency[perm[v]].sort_unstable();
        }
        Ok(Graph { adjacency })
    }

    pub(crate) fn check_vertices(&self, set: &[usize]) -> Result<()> {
        match set.iter().find(|&&v| v >= self.n()) {
            Some(&vertex) => Err(Error::VertexOutOfRange { vertex, n: self.n() }),
            None => Ok(()),
        }
    }

    fn insert(&mut self, u: usize, v: usize) {
        let pos = self.adjacency[u].binary_search(&v).unwrap_err();
        self.adjacency[u].insert(pos, v);
        let pos = self.adjacency[v].binary_search(&u).unwrap_err();
        self.adjacency[v].insert(pos, u);
    }

    fn delete(&mut self, u: usize, v: usize) {
        let pos = self.adjacency[u].binary_search(&v).unwrap();
        self.adjacency[u].remove(pos);
        let pos = self.adjacency[v].binary_search(&u).unwrap();
        self.adjacency[v].remove(pos);
    }
}

fn check_pair(n: usize, u: usize, v: usize) -> Result<()> {
    if u >= n {
        return Err(Error::VertexOutOfRange { vertex: u, n });
    }
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    if u == v {
        return Err(Error::SelfLoop(u));
    }
    Ok(())
}
