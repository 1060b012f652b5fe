//! Signless Laplacian spectra of k-trees.
//!
//! This crate holds the pure algorithmic layer: a small dense graph type,
//! canonical labeling, k-tree construction/recognition/enumeration, the
//! simplicial-vertex and clique statistics used to classify k-trees, a Jacobi
//! eigensolver for `Q(G) = D(G) + A(G)`, Perron-guided rewiring steps that
//! strictly increase the signless Laplacian index, and an exhaustive verifier
//! for the three extremal k-trees.
//!
//! It is `no_std` and only needs `alloc`. File formats, the CLI and parallel
//! drivers live in the `kspectra` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod canon;
pub mod counterexample;
mod error;
pub mod graph;
pub mod ktree;
pub mod rewire;
pub mod spectral;
pub mod stats;
pub mod verify;

pub use canon::{canonical_form, canonical_label, find_isomorphism, is_isomorphic, CanonicalLabel};
pub use error::{Error, Result};
pub use graph::Graph;
pub use ktree::{enumerate_ktrees, is_k_tree, Budget, Family, KTreeCertificate, NamedFamily};
pub use spectral::{compare_q1, q1, signless_laplacian, spectrum, Q1Order, SpectralResult, SymMatrix};
pub use stats::{l_local, l_max, simplicial_vertices, StructureProfile};

/// Default gap below which two signless Laplacian indices are reported as a tie.
pub const DEFAULT_GAP_TOL: f64 = 1e-8;
