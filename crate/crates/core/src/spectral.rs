//! Signless Laplacian `Q(G) = D(G) + A(G)` and its spectrum.
//!
//! The eigensolver is cyclic Jacobi: plane rotations annihilate one
//! off-diagonal entry at a time until the off-diagonal Frobenius norm drops
//! below [`JACOBI_OFF_TOL`]. Accumulating the rotations gives the
//! eigenvectors, so the Perron vector comes out of the same sweep.

use alloc::vec;
use alloc::vec::Vec;

use libm::{fabs, sqrt};

use crate::{Error, Graph, Result};

pub const MAX_MATRIX_ORDER: usize = 256;
pub const JACOBI_OFF_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Dense symmetric matrix stored as its packed lower triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    order: usize,
    lower: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(order: usize) -> Self {
        SymMatrix {
            order,
            lower: vec![0.0; order * (order + 1) / 2],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    fn index(i: usize, j: usize) -> usize {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        r * (r + 1) / 2 + c
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[Self::index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.lower[Self::index(i, j)] = value;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    fn to_dense(&self) -> Vec<f64> {
        let n = self.order;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = self.get(i, j);
            }
        }
        a
    }
}

pub fn signless_laplacian(g: &Graph) -> SymMatrix {
    let mut q = SymMatrix::zeros(g.n());
    for v in 0..g.n() {
        q.set(v, v, g.degree(v) as f64);
    }
    for (u, v) in g.edges() {
        q.set(u, v, 1.0);
    }
    q
}

/// Combinatorial Laplacian `D(G) - A(G)`.
pub fn laplacian(g: &Graph) -> SymMatrix {
    let mut l = SymMatrix::zeros(g.n());
    for v in 0..g.n() {
        l.set(v, v, g.degree(v) as f64);
    }
    for (u, v) in g.edges() {
        l.set(u, v, -1.0);
    }
    l
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    /// Eigenvalues, largest first.
    pub eigenvalues: Vec<f64>,
    /// Unit eigenvector of the largest eigenvalue, largest-magnitude entry positive.
    pub perron: Vec<f64>,
    /// `max_i |(M x - q_1 x)_i|` for the returned Perron vector.
    pub residual: f64,
    /// Jacobi sweeps performed.
    pub sweeps: usize,
}

impl SpectralResult {
    pub fn q1(&self) -> f64 {
        self.eigenvalues[0]
    }
}

pub fn spectrum(m: &SymMatrix) -> Result<SpectralResult> {
    let n = m.order();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > MAX_MATRIX_ORDER {
        return Err(Error::MatrixTooLarge(n));
    }
    if m.lower.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteEntry);
    }
    let mut a = m.to_dense();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && off_norm(&a, n) >= JACOBI_OFF_TOL {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let top = order[0];
    let mut perron: Vec<f64> = (0..n).map(|r| v[r * n + top]).collect();
    let norm = sqrt(perron.iter().map(|x| x * x).sum());
    let pivot = perron
        .iter()
        .copied()
        .fold(0.0f64, |best, x| if fabs(x) > fabs(best) { x } else { best });
    let scale = if pivot < 0.0 { -1.0 / norm } else { 1.0 / norm };
    for x in &mut perron {
        *x *= scale;
    }
    let q1 = eigenvalues[0];
    let residual = m
        .mul_vec(&perron)
        .iter()
        .zip(&perron)
        .map(|(mx, x)| fabs(mx - q1 * x))
        .fold(0.0, f64::max);
    Ok(SpectralResult {
        eigenvalues,
        perron,
        residual,
        sweeps,
    })
}

fn off_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            sum += 2.0 * a[i * n + j] * a[i * n + j];
        }
    }
    sqrt(sum)
}

fn rotate(a: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta >= 0.0 {
        1.0 / (theta + sqrt(1.0 + theta * theta))
    } else {
        -1.0 / (-theta + sqrt(1.0 + theta * theta))
    };
    let c = 1.0 / sqrt(1.0 + t * t);
    let s = t * c;
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = c * akp - s * akq;
        a[k * n + q] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = c * apk - s * aqk;
        a[q * n + k] = s * apk + c * aqk;
    }
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
    }
}

pub fn graph_spectrum(g: &Graph) -> Result<SpectralResult> {
    spectrum(&signless_laplacian(g))
}

/// The signless Laplacian index `q_1(G)`.
pub fn q1(g: &Graph) -> Result<f64> {
    graph_spectrum(g).map(|s| s.q1())
}

/// Perron vector of `Q(G)`. Requires a connected graph.
pub fn perron_vector(g: &Graph) -> Result<Vec<f64>> {
    if !g.is_connected()? {
        return Err(Error::Disconnected);
    }
    graph_spectrum(g).map(|s| s.perron)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Q1Order {
    Less,
    Greater,
    Tie,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Q1Comparison {
    pub order: Q1Order,
    /// `q_1(G) - q_1(H)`.
    pub gap: f64,
}

/// Compares `q_1(G)` with `q_1(H)`; differences within `gap_tol` are ties.
pub fn compare_q1(g: &Graph, h: &Graph, gap_tol: f64) -> Result<Q1Comparison> {
    Ok(compare_values(q1(g)?, q1(h)?, gap_tol))
}

pub fn compare_values(a: f64, b: f64, gap_tol: f64) -> Q1Comparison {
    let gap = a - b;
    let order = if gap > gap_tol {
        Q1Order::Greater
    } else if gap < -gap_tol {
        Q1Order::Less
    } else {
        Q1Order::Tie
    };
    Q1Comparison { order, gap }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerResult {
    pub value: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Power iteration from the all-ones vector; a cross-check for the largest
/// eigenpair of a nonnegative matrix.
pub fn power_iteration(m: &SymMatrix, tol: f64, max_iter: usize) -> Result<PowerResult> {
    let n = m.order();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut x = vec![1.0 / sqrt(n as f64); n];
    let mut value = 0.0;
    for iteration in 1..=max_iter {
        let y = m.mul_vec(&x);
        let norm = sqrt(y.iter().map(|t| t * t).sum());
        if norm == 0.0 {
            return Ok(PowerResult {
                value: 0.0,
                vector: x,
                iterations: iteration,
                converged: true,
            });
        }
        let next: Vec<f64> = y.iter().map(|t| t / norm).collect();
        let change = next.iter().zip(&x).map(|(a, b)| fabs(a - b)).fold(0.0, f64::max);
        value = next.iter().zip(m.mul_vec(&next)).map(|(a, b)| a * b).sum();
        x = next;
        if change < tol {
            return Ok(PowerResult {
                value,
                vector: x,
                iterations: iteration,
                converged: true,
            });
        }
    }
    Ok(PowerResult {
        value,
        vector: x,
        iterations: max_iter,
        converged: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ktree::{enumerate_ktrees, make_g1, make_g2, make_g4, make_k_star};

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn dense(m: &SymMatrix) -> Vec<Vec<f64>> {
        (0..m.order())
            .map(|i| (0..m.order()).map(|j| m.get(i, j)).collect())
            .collect()
    }

    #[test]
    fn small_matrices() {
        let k2 = Graph::complete(2);
        assert_eq!(dense(&signless_laplacian(&k2)), [[1.0, 1.0], [1.0, 1.0]]);
        assert_eq!(
            dense(&signless_laplacian(&path(3))),
            [[1.0, 1.0, 0.0], [1.0, 2.0, 1.0], [0.0, 1.0, 1.0]]
        );
        let g = make_g2(8, 2).unwrap();
        let q = signless_laplacian(&g);
        for i in 0..g.n() {
            let row: f64 = (0..g.n()).map(|j| q.get(i, j)).sum();
            assert_eq!(row, 2.0 * g.degree(i) as f64);
        }
    }

    #[test]
    fn complete_graph_spectrum() {
        for n in 2..12 {
            let s = graph_spectrum(&Graph::complete(n)).unwrap();
            assert!((s.eigenvalues[0] - (2 * n - 2) as f64).abs() < 1e-10);
            for &q in &s.eigenvalues[1..] {
                assert!((q - (n - 2) as f64).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn path_three_spectrum() {
        // det(Q - x I) = (1 - x)((2 - x)(1 - x) - 2) = -(x - 1) x (x - 3).
        let s = graph_spectrum(&path(3)).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([3.0, 1.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn star_index() {
        // det(Q - x I) for K_{1,m} is (1 - x)^{m-1} x (x - m - 1).
        for m in 1..12 {
            let value = q1(&make_k_star(1, m).unwrap()).unwrap();
            assert!((value - (m + 1) as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn single_vertex() {
        let s = graph_spectrum(&Graph::new(1)).unwrap();
        assert_eq!(s.eigenvalues, [0.0]);
        assert_eq!(s.perron, [1.0]);
        assert_eq!(spectrum(&SymMatrix::zeros(0)), Err(Error::EmptyGraph));
    }

    #[test]
    fn rejects_bad_input() {
        let mut m = SymMatrix::zeros(2);
        m.set(0, 1, f64::NAN);
        assert_eq!(spectrum(&m), Err(Error::NonFiniteEntry));
        assert_eq!(spectrum(&SymMatrix::zeros(257)), Err(Error::MatrixTooLarge(257)));
        let disconnected = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(graph_spectrum(&disconnected).is_ok());
        assert_eq!(perron_vector(&disconnected), Err(Error::Disconnected));
    }

    #[test]
    fn comparisons() {
        let g = make_g1(6, 2).unwrap();
        assert_eq!(compare_q1(&g, &g, 0.0).unwrap().order, Q1Order::Tie);
        let c = compare_q1(&make_k_star(2, 4).unwrap(), &g, 1e-8).unwrap();
        assert_eq!(c.order, Q1Order::Greater);
        let c = compare_q1(&make_g4(8, 2).unwrap(), &make_g2(8, 2).unwrap(), 1e-8).unwrap();
        assert_eq!(c.order, Q1Order::Less);
        assert_eq!(compare_values(1.0, 1.0 + 1e-9, 1e-8).order, Q1Order::Tie);
    }

    #[test]
    fn identities_on_enumerated_k_trees() {
        for (n, k) in [(8, 2), (9, 1), (8, 3)] {
            for g in enumerate_ktrees(n, k).unwrap() {
                let s = graph_spectrum(&g).unwrap();
                let degrees = g.degrees();
                let trace: f64 = degrees.iter().map(|&d| d as f64).sum();
                let second: f64 = degrees.iter().map(|&d| (d * d + d) as f64).sum();
                assert!((s.eigenvalues.iter().sum::<f64>() - trace).abs() < 1e-9);
                assert!((s.eigenvalues.iter().map(|q| q * q).sum::<f64>() - second).abs() < 1e-8);
                assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
                assert!(*s.eigenvalues.last().unwrap() >= -1e-10);
                assert!(s.residual <= 1e-10);
                assert!(s.perron.iter().all(|&x| x > 0.0));
                let max_degree = *degrees.iter().max().unwrap() as f64;
                let edge_bound = g.edges().map(|(u, v)| degrees[u] + degrees[v]).max().unwrap() as f64;
                assert!(max_degree + 1.0 <= s.q1() + 1e-10 && s.q1() <= edge_bound + 1e-10);
            }
        }
    }

    #[test]
    fn edge_deletion_never_increases_index() {
        for g in enumerate_ktrees(7, 2).unwrap() {
            let full = q1(&g).unwrap();
            for (u, v) in g.edges() {
                let h = g.remove_edge(u, v).unwrap();
                if h.is_connected().unwrap() {
                    assert!(q1(&h).unwrap() <= full + 1e-10);
                }
            }
        }
    }

    #[test]
    fn power_iteration_agrees() {
        for g in enumerate_ktrees(8, 2).unwrap() {
            let q = signless_laplacian(&g);
            let jacobi = spectrum(&q).unwrap();
            let power = power_iteration(&q, 1e-13, 100_000).unwrap();
            assert!(power.converged);
            assert!((power.value - jacobi.q1()).abs() < 1e-9);
            for (a, b) in power.vector.iter().zip(&jacobi.perron) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn tree_spectrum_matches_laplacian() {
        // Q and L are similar for bipartite graphs; solve L with nalgebra as an
        // independent route.
        for g in enumerate_ktrees(9, 1).unwrap() {
            let q = graph_spectrum(&g).unwrap();
            let l = laplacian(&g);
            let n = g.n();
            let m = nalgebra::DMatrix::from_fn(n, n, |i, j| l.get(i, j));
            let mut reference: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
            reference.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in q.eigenvalues.iter().zip(&reference) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }
}
