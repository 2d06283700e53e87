use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Path metrics are undefined on a disconnected graph.
    #[error("graph is disconnected: {unreachable} of {n} nodes unreachable from node {root}")]
    DisconnectedGraph { root: u32, unreachable: usize, n: usize },

    /// A jump set whose offsets collide or vanish modulo the lattice.
    #[error("degenerate jump set: {0}")]
    DegenerateJumpSet(String),

    /// The requested half/half node partition does not exist.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// An odd-degree jump set whose generated graph is not simple and regular.
    #[error("jump set breaks symmetry: {0}")]
    AsymmetricJumpSet(String),

    /// The coprime relabeling requires gcd(n_s, n_o) = 1.
    #[error("lattice sides are not coprime: gcd({n_s}, {n_o}) != 1")]
    NotCoprime { n_s: usize, n_o: usize },

    /// No circulant jump width satisfies both window inequalities.
    #[error("no jump width fits {n} nodes: ({lo} <= {n} <= {hi}) fails for w = {w}")]
    WindowViolation { n: usize, w: usize, lo: f64, hi: usize },

    /// An offset sweep found no candidate that builds a valid topology.
    #[error("no feasible offset for a {n_s} x {n_o} lattice")]
    NoFeasibleOffset { n_s: usize, n_o: usize },

    /// A jump-set sweep found no candidate that builds a valid topology.
    #[error("no feasible jump set for a {n_s} x {n_o} lattice")]
    NoFeasibleJumpSet { n_s: usize, n_o: usize },

    /// Random regular sampling exhausted its restart budget.
    #[error("sampling a {delta}-regular graph on {n} nodes failed after {restarts} restarts")]
    InfeasibleSample { n: usize, delta: usize, restarts: usize },

    /// The lattice cannot be partitioned into cells at the requested density.
    #[error("incompatible density: {0}")]
    IncompatibleDensity(String),

    /// A cell has too few nodes to host one connector per adjacent cell.
    #[error("cell {cell} has {available} nodes but needs {needed} boundary connectors")]
    ConnectorExhaustion { cell: usize, available: usize, needed: usize },

    /// An edge exceeding the length budget survived construction; a bug signal.
    #[error("edge ({u}, {v}) has length {length} exceeding the budget {budget}")]
    RangeViolation { u: u32, v: u32, length: f64, budget: f64 },

    /// An edge list that is not a simple graph on the declared node set.
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    /// An argument outside an operation's documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
