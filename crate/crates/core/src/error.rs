use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("non-finite entry (NaN or infinity)")]
    NonFinite,

    #[error("vector is not normalized: norm {0}")]
    NotNormalized(f64),

    #[error("operator is not Hermitian: residual {0}")]
    NotHermitian(f64),

    #[error("operator is not unitary: residual {0}")]
    NotUnitary(f64),

    #[error("operator is not positive semidefinite: min eigenvalue {0}")]
    NotPositive(f64),

    #[error("operator is not a projection: residual {0}")]
    NotProjection(f64),

    #[error("operator is not a valid effect: eigenvalue {0} outside [0, 1]")]
    NotEffect(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("POVM effects do not sum to identity: residual {0}")]
    IncompletePovm(f64),

    #[error("POVM must have at least one outcome")]
    EmptyPovm,

    #[error("duplicate outcome label: {0}")]
    DuplicateLabel(String),

    #[error("unknown outcome label: {0}")]
    UnknownLabel(String),

    #[error("outcome {label} has probability {probability:.3e}, conditional state undefined")]
    ZeroProbabilityOutcome { label: String, probability: f64 },

    #[error("direction vector is not unit length: norm {0}")]
    NotUnitDirection(f64),

    #[error("operation requires dimension {expected}, got {actual}")]
    RequiresDimension { expected: usize, actual: usize },

    #[error("states are equal up to phase; no unambiguous discrimination possible")]
    StatesCoincide,

    #[error("priors must be in [0, 1] and sum to 1, got {0}")]
    InvalidPrior(f64),

    #[error("protocol must have exactly 2 letters for the analytic inference, got {0}")]
    LetterCount(usize),

    #[error("POVM is not informationally complete: frame rank {rank} < {needed}")]
    NotInformationallyComplete { rank: usize, needed: usize },

    #[error("frequency vector has {got} entries, POVM has {expected} outcomes")]
    FrequencyMismatch { expected: usize, got: usize },

    #[error("phase function has {got} values, observable has {expected} eigenvalues")]
    PhaseFunctionMismatch { expected: usize, got: usize },

    #[error("sharp observable is malformed: {0}")]
    MalformedObservable(String),

    #[error("measurement scheme is malformed: {0}")]
    MalformedScheme(String),

    #[error("resolution must be at least {min}, got {got}")]
    ResolutionTooCoarse { min: usize, got: usize },

    #[error("trial count must be at least 1")]
    ZeroTrials,

    #[error("reconstructed operator has vanishing trace after eigenvalue clipping")]
    DegenerateReconstruction,
}

pub type Result<T> = std::result::Result<T, Error>;
