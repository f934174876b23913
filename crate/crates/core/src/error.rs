use thiserror::Error;

/// Errors surfaced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("occupation must be nonnegative, got {0}")]
    NegativeOccupation(f64),
    #[error("length mismatch: {left} frequencies vs {right} occupations")]
    LengthMismatch { left: usize, right: usize },
    #[error("mode index {index} out of range for {modes} modes")]
    IndexOutOfRange { index: usize, modes: usize },
    #[error("duplicate mode index {0}")]
    DuplicateIndex(usize),
    #[error("cross-coherence requires two distinct modes, got index {0} twice")]
    IdenticalIndices(usize),
    #[error("covariance matrix is not symmetric: |C[{i},{j}] - C[{j},{i}]| = {asym:e}")]
    NotSymmetric { i: usize, j: usize, asym: f64 },
    #[error("covariance matrix dimension {0} is not a positive even integer")]
    BadDimension(usize),
    #[error(
        "state is not physical: min eigenvalue of C + iJ/2 is {min_eig:e} (tolerance {tol:e})"
    )]
    NonPhysicalState { min_eig: f64, tol: f64 },
    #[error("expected a two-mode (4x4) covariance matrix, got dimension {0}")]
    NotTwoMode(usize),
    #[error("covariance matrices carry different mode frequencies; states are expressed in incompatible quadrature conventions")]
    FrequencyConventionMismatch,
    #[error("invalid machine parameter {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("spectral density requires omega >= 0, got {0}")]
    NegativeOmega(f64),
    #[error("principal-value integral is singular at omega0 = cutoff = {0}")]
    OmegaAtCutoff(f64),
    #[error(
        "eigenmode frequency {omega} - g = {value} is not positive; secular description invalid"
    )]
    EigenfrequencyNotPositive { omega: f64, value: f64 },
    #[error("bath discretization requires n >= 1, got {0}")]
    BadBathSize(usize),
    #[error("compound model would have {requested} modes, exceeding the cap of {cap}")]
    DimensionCap { requested: usize, cap: usize },
    #[error("ODE step size underflow at t = {t}: |h| = {h:e}")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("Liouvillian kernel is degenerate: {dim} singular values below threshold")]
    DegenerateKernel { dim: usize },
    #[error("density matrix is not physical: {0}")]
    NonPhysicalDensityMatrix(String),
    #[error("linear algebra backend failure: {0}")]
    Linalg(String),
    #[error("failed to parse parameters: {0}")]
    Parse(String),
}
