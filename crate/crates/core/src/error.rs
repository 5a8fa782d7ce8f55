use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {dim} exceeds the limit of {limit} amplitudes")]
    DimensionLimit { dim: usize, limit: usize },
    #[error("invalid subsystem: {0}")]
    InvalidSubsystem(String),
    #[error("spec mismatch: {0}")]
    SpecMismatch(String),
    #[error("wire-kind mismatch: {0}")]
    WireKindMismatch(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("rotation axis is not a unit vector (norm {0})")]
    NonUnitAxis(f64),
    #[error("cutoff {cutoff} too small for amplitude {amplitude} (tail mass {tail:e})")]
    CutoffTooSmall { cutoff: usize, amplitude: f64, tail: f64 },
    #[error("level {level} exceeds cutoff {cutoff}")]
    ExceedsCutoff { level: usize, cutoff: usize },
    #[error("input is not in the symmetric subspace (residual {0:e})")]
    NonSymmetricInput(f64),
    #[error("input is not in the photon-number sector (residual {0:e})")]
    NotInSector(f64),
    #[error("state is not supported on the {0}")]
    OutsideSubspace(String),
    #[error("observable is not Hermitian (deviation {0:e})")]
    NonHermitian(f64),
    #[error("modal swap requires equal cutoffs, found {0} and {1}")]
    UnequalCutoffs(usize, usize),
    #[error("label `{0}` not present")]
    LabelMissing(String),
    #[error("value {value} is outside the alphabet of {gate}")]
    OutsideAlphabet { gate: String, value: String },
    #[error("malformed circuit: {0}")]
    MalformedCircuit(String),
    #[error("quantum wire `{0}` used after measurement")]
    ReuseAfterMeasure(String),
    #[error("circuit is not measurement-free")]
    NotMeasurementFree,
    #[error("incompatible query: {0}")]
    IncompatibleQuery(String),
    #[error("deferral precondition violated: {0}")]
    DeferralPrecondition(String),
    #[error("operating point is degenerate (derivative {0:e})")]
    DegenerateOperatingPoint(f64),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("not an outcome permutation: {0}")]
    NotPermutation(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
