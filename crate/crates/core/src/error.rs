use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the photon-fidelity computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Refinement ran out of budget before two successive passes agreed.
    #[error(
        "quadrature did not converge after {refinements} refinements \
         (best value {value}, estimated error {estimate:e})"
    )]
    ConvergenceFailure {
        value: Complex64,
        estimate: f64,
        refinements: usize,
    },

    #[error("degenerate state: norm {norm:e} is below the zero-norm tolerance")]
    DegenerateState { norm: f64 },

    #[error("phase undefined: overlap modulus {overlap:e} is below tolerance")]
    UndefinedPhase { overlap: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("wave vector ({kx}, {ky}, {kz}) lies on the polarization axis singularity")]
    AxisSingularity { kx: f64, ky: f64, kz: f64 },

    #[error("phase branch undefined: numerator and denominator both vanish")]
    BranchUndefined,

    #[error("inconsistent transform: |(k'/k) e*(k).O^T e(k')| = {modulus} differs from 1")]
    InconsistentTransform { modulus: f64 },

    #[error("incompatible grids")]
    IncompatibleGrid,

    #[error("grid of {points} points exceeds the limit of {limit}")]
    ResourceLimit { points: usize, limit: usize },

    #[error("fidelity never drops to {threshold} for shifts up to {bracket_max}")]
    NoCrossing { threshold: f64, bracket_max: f64 },

    #[error("fidelity is not monotone near the crossing (between {lo} and {hi})")]
    AmbiguousRoot { lo: f64, hi: f64 },

    /// Writing stopped partway; the rows before the failure were emitted.
    #[error("output truncated after {rows_written} rows: {source}")]
    PartialOutput {
        rows_written: usize,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
