use thiserror::Error;

use crate::catalog::FiberKind;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("integer overflow while {0}")]
    Overflow(&'static str),

    #[error("matrix [[{0}, {1}], [{2}, {3}]] does not have determinant 1")]
    NotUnimodular(i64, i64, i64, i64),

    #[error("invalid letter {0:?} in monodromy word (expected 'a' or 'b')")]
    InvalidLetter(char),

    #[error("unknown fiber type {0:?}")]
    UnknownFiber(String),

    #[error("{0} is not a resolvable singular type")]
    NotResolvable(FiberKind),

    #[error("vertex {0} does not exist")]
    MissingVertex(usize),

    #[error("edge ({0}, {1}) does not exist")]
    MissingEdge(usize, usize),

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("vertices {0} and {1} are already joined")]
    DuplicateEdge(usize, usize),

    #[error("graph is empty")]
    EmptyGraph,

    #[error("graph is not connected")]
    Disconnected,

    #[error("not bipartite: odd cycle through vertex {0}")]
    NotBipartite(usize),

    #[error("graph is not a tree ({vertices} vertices, {edges} edges)")]
    NotATree { vertices: usize, edges: usize },

    #[error("vertex {vertex} has genus {genus}; smoothing needs spheres")]
    PositiveGenus { vertex: usize, genus: u32 },

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("E(n) needs n >= 2, got n = {0}")]
    DegreeTooSmall(u32),

    #[error("euler sum {sum} ≠ {expected}")]
    EulerMismatch { sum: u64, expected: u64 },

    #[error("total monodromy is [[{0}, {1}], [{2}, {3}]], not the identity")]
    NonTrivialMonodromy(i64, i64, i64, i64),

    #[error("fiber #{index} ({fiber}) cannot be used with choice '{choice}'")]
    InvalidChoice {
        index: usize,
        fiber: FiberKind,
        choice: &'static str,
    },

    #[error("plan has {plan} choices but the fibration has {fibers} fibers")]
    PlanLength { plan: usize, fibers: usize },

    #[error("plan spends {spent} blow-ups, but the budget is {budget}")]
    BudgetMismatch { spent: u64, budget: u64 },

    #[error("{0} requires --extended-fibers")]
    ExtendedFiber(FiberKind),

    #[error("allowed fiber set is empty")]
    EmptyAllowedSet,

    #[error("no configuration in E({n})#{k} with the allowed fibers")]
    NoSolution { n: u32, k: u32 },

    #[error("{what} = {value} exceeds the limit {limit}")]
    LimitExceeded { what: &'static str, value: u32, limit: u32 },

    #[error("replay gave {replayed} but the search reported {reported}")]
    ReplayMismatch { reported: i64, replayed: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
