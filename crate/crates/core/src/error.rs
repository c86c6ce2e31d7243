use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot add radicals with different radicands ({0} and {1})")]
    MixedRadicand(String, String),
    #[error("negative radicand {0}")]
    NegativeRadicand(String),
    #[error("radicand {0} has a cofactor too large to certify as squarefree")]
    RadicandTooLarge(String),
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("Pfaffian of odd-sized matrix ({0})")]
    OddSize(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector lists do not span the same subspace")]
    SpanMismatch,
    #[error("operator does not preserve the span of the given basis")]
    NotInvariant,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("zero vector")]
    ZeroVector,
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("product of 3-cycles is not a single cycle through all {0} vertices")]
    NotSingleCycle(usize),
    #[error("edge list is not a spanning tree on {0} vertices")]
    NotATree(usize),
    #[error("index {index} out of range for size {size}")]
    Index { index: usize, size: usize },
    #[error("parameters exceed desk-scale limits: {0}")]
    ScaleLimit(String),
    #[error("right-hand side vanishes for every instantiation: {0}")]
    DegenerateRhs(String),
    #[error("file format error: {0}")]
    FileFormat(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown {kind}: {value}")]
    Unknown { kind: &'static str, value: String },
}

pub type Result<T> = std::result::Result<T, Error>;
