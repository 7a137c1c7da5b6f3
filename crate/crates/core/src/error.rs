//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site index {site} out of range for chain of {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("sites must be distinct, got {0} twice")]
    DuplicateSite(usize),

    #[error("chain length must be even and >= 2, got {0}")]
    BadChainLength(usize),

    #[error("angle arrays have length {got}, expected {expected}")]
    AngleLength { got: usize, expected: usize },

    #[error("subsystem length {l} out of range 1..={max} for {n_sites} sites")]
    BadSubsystemLength { l: usize, max: usize, n_sites: usize },

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("eigenvalue {0:.3e} below positivity tolerance")]
    NotPositive(f64),

    #[error("stagger amplitude must lie in [0, 1], got {0}")]
    StaggerOutOfRange(f64),

    #[error("theta={0} is a tangent singularity, no phase can zero the energy there")]
    ThetaSingular(f64),

    #[error("no energy-zeroing phase exists for this theta (arccos argument {0:.6})")]
    NoZeroEnergyPhase(f64),

    #[error("dense oracle limited to N <= 8, got {0}")]
    OracleTooLarge(usize),

    #[error("eigensolver failed to converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("stability bound violated: D*dt = {0} > 0.25")]
    UnstableScheme(f64),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("analysis error: {0}")]
    Analysis(String),

    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialize(String),
}
