use alloc::string::String;

use crate::ktree::Family;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("self-loop requested at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} already present")]
    DuplicateEdge(usize, usize),
    #[error("edge {0}-{1} absent")]
    MissingEdge(usize, usize),
    #[error("vertex {vertex} out of range for graph of order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("operation undefined on the empty graph")]
    EmptyGraph,
    #[error("graph of order {n} exceeds the supported maximum {max}")]
    GraphTooLarge { n: usize, max: usize },
    #[error("family {family:?} is not defined for n = {n}, k = {k}")]
    InfeasibleFamily { family: Family, n: usize, k: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vertex set is not a clique")]
    NotAClique,
    #[error("graph has no {0}-clique")]
    NoClique(usize),
    #[error("graph is not a {0}-tree")]
    NotKTree(usize),
    #[error("enumeration of ({n}, {k}) exceeds the budget")]
    BudgetExceeded { n: usize, k: usize },
    #[error("matrix has a non-finite entry")]
    NonFiniteEntry,
    #[error("matrix order {0} exceeds the supported maximum")]
    MatrixTooLarge(usize),
    #[error("shift move invalid: {0}")]
    InvalidShift(String),
    #[error("Perron hypothesis fails: x_source = {x_source} > x_target = {x_target}")]
    PerronHypothesis { x_source: f64, x_target: f64 },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("postcondition violated: {0}")]
    Postcondition(String),
    #[error("value {0} outside the domain (0, 1]")]
    Domain(f64),
}
