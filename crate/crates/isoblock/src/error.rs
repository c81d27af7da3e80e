//! Error type shared by all modules of the crate.

use num_complex::Complex64;

/// Errors produced by partition construction, stratum checks and the
/// compressed-scale solvers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An index appears in more than one block (1-based in the message).
    #[error("index {index} appears in more than one block")]
    Overlap { index: usize },

    /// An index of `{1..n}` is not covered by any block.
    #[error("index {index} is not covered by any block")]
    Coverage { index: usize },

    /// An index lies outside `{1..n}`.
    #[error("index {index} outside the range 1..={n}")]
    Range { index: usize, n: usize },

    /// A block in the input is empty.
    #[error("blocks must be non-empty")]
    EmptyBlock,

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The second partition is not a coarsening of the first.
    #[error("partition is not a coarsening of the base partition")]
    NotACoarsening,

    /// The matrix does not lie in the closed stratum of the given partition.
    #[error("matrix is not in the closed stratum of the partition (group {group}, tol {tol:e})")]
    NotInStratum { group: &'static str, tol: f64 },

    /// The resolvent was requested at a point of the spectrum.
    #[error("resolvent point {point} lies in the spectrum (distance {distance:e})")]
    SpectrumHit { point: Complex64, distance: f64 },

    /// The compressed matrix is too far from diagonalizable for the
    /// eigenvector-based functional calculus.
    #[error("eigenvector matrix condition number {cond:e} exceeds the diagonalization threshold; use a polynomial")]
    NonDiagonalizable { cond: f64 },

    /// A scalar function was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A Hermitian input was required.
    #[error("matrix is not Hermitian within tolerance")]
    NotHermitian,

    /// The 3-PMP hypothesis fails, so the simultaneous-kernel identity is
    /// not available.
    #[error("matrix is not 3-PMP; the kernel identity does not apply")]
    NotPmp,

    /// A diagonal block violates the Loewner condition, so the block PSD
    /// criterion is not applicable.
    #[error("diagonal block {block} violates the Loewner condition")]
    LoewnerConditionFailed { block: usize },

    /// Input violates the hypotheses of the block-correlation theorem.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    /// The compressed linear operator is singular.
    #[error("compressed equation operator is singular")]
    SingularOperator,

    /// The Sylvester spectra condition `spec(a) ∩ spec(-b) = ∅` fails.
    #[error("spectra of the compressed coefficients overlap; the equation is not uniquely solvable")]
    SpectraOverlap,

    /// The Riccati Newton iteration did not converge.
    #[error("Newton iteration did not converge after {iterations} steps")]
    NoConvergence { iterations: usize },

    /// `I - A` is singular, so the Cayley transform is undefined.
    #[error("I - A is singular; the Cayley transform is undefined")]
    SingularCayley,
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
