//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the exact-algebra and numeric layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Two operands were built for different genera.
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),

    /// Genus outside the supported range of the operation.
    #[error("genus {got} out of range [{min}, {max}]")]
    GenusOutOfRange { got: usize, min: usize, max: usize },

    /// Invalid argument (zero element where nonzero required, odd level, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A cubic fed to the quartic lift was not fixed by the level subgroup.
    #[error("polynomial is not invariant under the level subgroup")]
    NotInvariant,

    /// The trigonometric Verlinde sum failed the integrality gate.
    #[error("integrality check failed: got {0}")]
    NonIntegral(String),

    /// Two routes that must agree exactly came out different; signals an
    /// arithmetic bug rather than bad input.
    #[error("internal consistency check failed: {0}")]
    ConsistencyCheck(String),

    /// Siegel matrix failed validation.
    #[error("invalid Siegel matrix: {0}")]
    BadTau(String),

    /// Lattice-sum truncation radius would exceed the hard cap.
    #[error("theta truncation radius {required:.2} exceeds cap {cap:.2}")]
    TruncationCap { required: f64, cap: f64 },

    /// Singular spectrum has no certified gap at the requested tolerance.
    #[error("indeterminate numerical rank: no spectral gap >= {min_ratio:.1e} at tol {tol:.1e}; spectrum = {spectrum:?}")]
    IndeterminateRank {
        tol: f64,
        min_ratio: f64,
        spectrum: Vec<f64>,
    },

    /// A numeric kernel came out with an unexpected dimension.
    #[error("kernel dimension {got}, expected {expected}")]
    UnexpectedKernelDim { got: usize, expected: usize },

    /// A residual check on a reconstructed hypersurface failed.
    #[error("residual check failed: {what} = {value:.3e} exceeds {bound:.3e}")]
    ResidualCheck {
        what: &'static str,
        value: f64,
        bound: f64,
    },

    /// Not enough sample points for a stable kernel computation.
    #[error("need at least {need} sample points, got {got}")]
    TooFewSamples { need: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
