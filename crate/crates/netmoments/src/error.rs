use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: expected two integer node ids, got {token:?}")]
    EdgeListParse { line: usize, token: String },

    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: u64 },

    #[error("line {line}: node id {id} below index base {base}")]
    IndexBase { line: usize, id: u64, base: u64 },

    #[error("node index {index} out of range for graph with {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },

    #[error("node set must be strictly increasing")]
    UnsortedNodeSet,

    #[error("graph has {n} nodes, need at least {min}")]
    GraphTooSmall { n: usize, min: usize },

    #[error("motif {0:?} is not a known catalog name or inline edge list")]
    UnknownMotif(String),

    #[error("motif template must be connected")]
    DisconnectedMotif,

    #[error("motif has {n} nodes, supported sizes are 2..={max}")]
    MotifTooLarge { n: usize, max: usize },

    #[error("merged pattern size {size} exceeds the supported bound {max}")]
    PatternTooLarge { size: usize, max: usize },

    #[error("exact count exceeds 128-bit integer range")]
    CountOverflow,

    #[error("subsample size {b} out of range: need {min} <= b <= {max}")]
    SubsampleSize { b: usize, min: usize, max: usize },

    #[error("host graph has zero edge density; rescaling by rho-hat is undefined")]
    DegenerateHost,

    #[error("sample dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("sample matrix must have at least one row")]
    EmptySample,

    #[error("conditional slice is empty; try a larger bandwidth than {bandwidth}")]
    EmptySlice { bandwidth: f64 },

    #[error("unknown graphon {0:?}; built-ins are \"graphon1\" and \"graphon2\"")]
    UnknownGraphon(String),

    #[error("cannot parse sparsity schedule {input:?}: {reason}")]
    ScheduleParse { input: String, reason: String },

    #[error("comparison requires g_large.n > g_small.n >= max motif size")]
    ComparisonSizes,

    #[error("experiment grid invalid: {0}")]
    InvalidGrid(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
