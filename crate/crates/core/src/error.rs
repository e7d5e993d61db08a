use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimensions {d_a}x{d_b}: each factor needs dimension at least 2")]
    InvalidDims { d_a: usize, d_b: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian: |A[{row}][{col}] - conj(A[{col}][{row}])| = {asymmetry:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        asymmetry: f64,
    },

    #[error("eigensolver failed to converge (residual {residual:e})")]
    ConvergenceFailure { residual: f64 },

    #[error("inner product has imaginary part {imag:e}")]
    NonRealResult { imag: f64 },

    #[error("vector is not normalized (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("ensemble weight {index} is not positive ({weight})")]
    InvalidWeight { index: usize, weight: f64 },

    #[error("ensemble weights sum to {sum}, expected 1")]
    WeightSumError { sum: f64 },

    #[error("not a density operator: trace {trace}, minimum eigenvalue {lambda_min:e}")]
    InvalidDensity { trace: f64, lambda_min: f64 },

    #[error("not a witness: c = {c} does not exceed the minimum eigenvalue {lambda0} of sigma")]
    NotAWitness { lambda0: f64, c: f64 },

    #[error("c = {c} exceeds the product-state infimum estimate {cmax}")]
    ExceedsCmax { c: f64, cmax: f64 },

    #[error("not a witness candidate: minimum eigenvalue {lambda_min} is not negative")]
    NotNegative { lambda_min: f64 },

    #[error("not a witness candidate: negative expectation {value:e} on a product vector")]
    NotBlockPositive { value: f64 },

    #[error("no product-state infimum estimate attached to the witness")]
    EstimateMissing,

    #[error("witnesses are built on different sigma (max entry difference {max_diff:e})")]
    DifferentSigma { max_diff: f64 },

    #[error("operator trace {trace:e} is too small to normalize")]
    ZeroTrace { trace: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}
