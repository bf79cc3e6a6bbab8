//! Error types shared across the crate.

use thiserror::Error;

/// Errors from chain algebra, flat norms and fillings.
#[derive(Debug, Error)]
pub enum ChainError {
    #[error("chain dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("chains live on different complexes: {0} vs {1}")]
    ComplexMismatch(String, String),
    #[error("operation needs dimension >= 1, got a 0-chain")]
    ZeroDimensional,
    #[error("chain of dimension {got} where {want} was required")]
    WrongDimension { want: usize, got: usize },
    #[error("input is not a cycle (boundary has {0} cells)")]
    NotACycle(usize),
    #[error("cycle is essential (not null-homologous); flat norm by min-cut undefined")]
    EssentialCycle,
    #[error("cycles lie in different homology classes; no filling exists")]
    DifferentClasses,
    #[error("minimal filling is not unique: both candidates have mass {0:.6}")]
    FillingTie(f64),
    #[error("radius {r} out of range (limit {limit})")]
    RadiusOutOfRange { r: f64, limit: f64 },
    #[error("exhaustive search limited to {limit} top cells, complex has {got}")]
    TooLargeForExhaustive { limit: usize, got: usize },
}

/// Errors from model construction and model-level queries.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("unsupported dimension {0} for this model family")]
    UnsupportedDimension(usize),
    #[error("resolution {0} out of range")]
    BadResolution(usize),
    #[error("degenerate level value {0}: equals a cell-center value")]
    DegenerateLevel(f64),
    #[error("retry budget exhausted while searching for a generic direction")]
    RetriesExhausted,
    #[error("ball packing verification failed after {0} shrink retries")]
    PackingFailed(usize),
    #[error("non-finite value encountered while sampling a scalar function")]
    NonFiniteValue,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Errors from parameter complexes and Z₂ (co)homology.
#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("cells belong to different complexes")]
    ComplexMismatch,
    #[error("subcomplex check failed: {0}")]
    NotASubcomplex(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("complex too large for dense representative computation ({0} cells)")]
    TooLarge(usize),
}

/// Errors from families, discretization and detection.
#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("family has the {0} backend; operation needs {1}")]
    WrongBackend(&'static str, &'static str),
    #[error("family value is degenerate at parameter {0:?}: a cell-center value vanished")]
    DegenerateParameter(Vec<f64>),
    #[error("loop step too coarse for a unique small filling even after {refinements} refinements")]
    StepTooCoarse { refinements: usize },
    #[error("domain is not a closed loop")]
    NotALoop,
    #[error("restriction produced an empty subcomplex")]
    EmptyRestriction,
    #[error("fineness {fineness:.6} above working threshold {threshold:.6} after {refinements} refinements")]
    TooCoarse {
        fineness: f64,
        threshold: f64,
        refinements: usize,
    },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// Errors from width estimation.
#[derive(Debug, Error)]
pub enum WidthError {
    #[error("family is not detected at level {0}; refusing to report a width bound")]
    Undetected(usize),
    #[error("family is not a sweepout; ball-mass calibration needs a sweepout loop")]
    NotASweepout,
    #[error("no packing witness found within the refinement budget ({0} rounds)")]
    NoWitness(usize),
    #[error("need at least {need} distinct p values, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("width estimates decrease from p={p} ({a:.6}) to p={q} ({b:.6}) beyond tolerance")]
    MonotonicityViolation { p: usize, q: usize, a: f64, b: f64 },
    #[error("lower bound {lower:.6} exceeds upper estimate {upper:.6} at p={p}")]
    BoundInversion { p: usize, lower: f64, upper: f64 },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Errors from the experiment runner.
#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("report verification failed at {field}: {detail}")]
    VerifyFailed { field: String, detail: String },
    #[error("scenario assertion failed: {0}")]
    AssertionFailed(String),
    #[error(transparent)]
    Width(#[from] WidthError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}
