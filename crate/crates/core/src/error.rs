use thiserror::Error;

/// Failure modes of the engine. Everything here is a structural problem with
/// the inputs; numerical trouble inside an otherwise valid computation is
/// reported through sentinel values and convergence flags instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("node sequence needs at least {min} entries, got {got}")]
    TooShort { min: usize, got: usize },
    #[error("node moduli must be positive: |gamma_{n}| = 0")]
    ZeroModulus { n: usize },
    #[error("node entries must be distinct: gamma_{i} equals gamma_{j}")]
    DuplicateNode { i: usize, j: usize },
    #[error("node moduli must be strictly increasing: |gamma_{n}| >= |gamma_{m}|")]
    NonIncreasingModuli { n: usize, m: usize },
    #[error("weight v_{n} = {value} is not a positive finite number")]
    BadWeight { n: usize, value: f64 },
    #[error("node and weight sequences differ in length: {nodes} vs {weights}")]
    LengthMismatch { nodes: usize, weights: usize },
    #[error("point coincides with node gamma_{n}")]
    PointOnNode { n: usize },
    #[error("index n = {n} out of range 1..={len}")]
    IndexOutOfRange { n: usize, len: usize },
    #[error("test function '{kind}' is undefined at n = {n}: the index range it sums over is empty")]
    EmptyTestRange { kind: &'static str, n: usize },
    #[error("coefficient vector has {got} entries, space has {expected}")]
    CoefficientLength { got: usize, expected: usize },
    #[error("atom {i} lies exactly on node gamma_{n}")]
    AtomOnNode { i: usize, n: usize },
    #[error("measure component {i} rejected: {reason}")]
    BadComponent { i: usize, reason: String },
    #[error("discretization resolution must be at least 8, got {k}")]
    BadResolution { k: usize },
    #[error("embedding oracle needs a purely atomic measure; component {i} is continuous (discretize first)")]
    NotAtomic { i: usize },
}

pub type Result<T> = std::result::Result<T, CoreError>;
