use alloc::string::String;

/// Everything that can go wrong inside the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix data has {found} entries, expected {rows}x{cols}")]
    BadLength { rows: usize, cols: usize, found: usize },
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },
    #[error("dimension product overflows: {0} x {1}")]
    ShapeOverflow(usize, usize),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: |H - H^dag|_F = {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not unitary: unitarity defect {deviation:e}")]
    NotUnitary { deviation: f64 },
    #[error("vector is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },
    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),
    #[error("invalid density operator: {0}")]
    InvalidDensity(String),
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("operator is not of product form (operator Schmidt rank {rank})")]
    NotProductForm { rank: usize },
    #[error("operator is not of swap form (operator Schmidt rank of U*SWAP is {rank})")]
    NotSwapForm { rank: usize },
    #[error("swap form requires equal dimensions, got {d1} and {d2}")]
    UnequalDimensions { d1: usize, d2: usize },
    #[error("slice hypothesis violated: image of {input} ⊗ φ0 has second Schmidt coefficient {second_coefficient:e}")]
    SliceHypothesis {
        /// `e3` for a basis vector, `(e0+e2)/√2` for a superposition.
        input: String,
        /// Index of the first basis vector involved.
        index: usize,
        second_coefficient: f64,
    },
    #[error("slice images are inconsistent with both cases (residual {residual:e})")]
    InconsistentSlice { residual: f64 },
    #[error("no entangling witness among {candidates} candidates; tolerance is likely misconfigured")]
    WitnessExhausted { candidates: usize },
    #[error("path parameter {0} outside [0, 1]")]
    TimeOutOfRange(f64),
    #[error("probability defect: {0}")]
    ProbabilityDefect(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
