use thiserror::Error;

use crate::spectrum::SpectralPoint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("boundary parameters outside the unit disk: m0^2 + m1^2 = {norm2}")]
    ParameterDomain { norm2: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("I - U is not invertible (an eigenvalue of U equals 1); no inverse Cayley transform")]
    NoCayley,

    #[error("found only {} of {requested} positive wave numbers below k = {k_max}", found.len())]
    IncompleteSpectrum {
        requested: usize,
        k_max: f64,
        found: Vec<SpectralPoint>,
    },

    #[error("asymptotics violated at n = {n}: {detail}")]
    AsymptoticsViolation { n: usize, detail: String },

    #[error("k = {k} is a degenerate root; use the degenerate eigenbasis")]
    DegenerateRoot { k: f64 },

    #[error("k = {k} does not have a two-dimensional eigenspace")]
    InconsistentMultiplicity { k: f64 },

    #[error("normalization vanished (N^2 = {norm2})")]
    NumericalDegeneracy { norm2: f64 },

    #[error("position x = {x} lies outside the box [-1/2, 1/2]")]
    OutOfBox { x: f64 },

    #[error("omega ratio {ratio} outside [0, 1 + 2/k] at k = {k}")]
    OmegaInconsistent { k: f64, ratio: f64 },

    #[error("both A and B asymptotic coefficients vanish at k = {k}")]
    UndefinedAsymptote { k: f64 },

    #[error("only {events} junction events simulated; at least {required} needed")]
    InsufficientStatistics { events: u64, required: u64 },
}

impl Error {
    /// Errors caused by malformed input rather than numerical breakdown.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::ParameterDomain { .. } | Error::InvalidArgument(_) | Error::OutOfBox { .. }
        )
    }
}
