//! Crate error type: every typed failure the laboratory can signal.

use thiserror::Error;

/// Typed failures across the crate.
///
/// Variants carry enough context to tell a *mathematical* refusal (the
/// object handed in does not have the property the construction needs)
/// from a *numerical* one (a residual exceeded its tolerance) and from a
/// plain usage error (caps, invalid parameters).
#[derive(Error, Debug, Clone)]
pub enum Error {
    /// A matrix that must be a Lorentz transform fails `Λᵀ η Λ = η`.
    #[error("not a Lorentz matrix: metric residual {residual:.3e} exceeds {tolerance:.1e}")]
    NotLorentz { residual: f64, tolerance: f64 },

    /// A real-linear map violates the orthogonality required of it.
    #[error("matrix is not orthogonal: residual {residual:.3e}")]
    NotOrthogonal { residual: f64 },

    /// An operator does not (anti)commute with the complex structure as required.
    #[error("wrong complex-linearity type: {kind} residual {residual:.3e}")]
    WrongLinearity { kind: &'static str, residual: f64 },

    /// A subspace expected to be cyclic and separating is not.
    #[error("subspace is not standard: cyclic={cyclic}, separating={separating} (margin {margin:.3e})")]
    NotStandard {
        cyclic: bool,
        separating: bool,
        margin: f64,
    },

    /// Candidate modular data violates the reflection identity `J Δ J = Δ⁻¹`.
    #[error("modular pair violates J·Δ·J = Δ⁻¹: residual {residual:.3e}")]
    ModularPairMismatch { residual: f64 },

    /// The involution property `S² = 1` of the candidate conjugation fails.
    #[error("candidate conjugation is not an involution: residual {residual:.3e}")]
    NotInvolution { residual: f64 },

    /// A wedge outside the family the net can reach.
    #[error("wedge is not reachable by the implemented symmetry subgroup: {detail}")]
    UnreachableWedge { detail: String },

    /// Grid or representation parameters outside the supported ranges.
    #[error("invalid parameter: {detail}")]
    InvalidParameter { detail: String },

    /// An index map handed to the orbit engine is not a permutation of the grid.
    #[error("not a grid permutation: {detail}")]
    NotAPermutation { detail: String },

    /// Dense solver asked to exceed its dimension cap.
    #[error("dimension {dim} exceeds the dense-path cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    /// Structured solver asked about a set whose preconditions fail.
    #[error("structured path precondition failed: {detail}")]
    StructuredPrecondition { detail: String },

    /// Mixed sector shapes where identical shapes are required.
    #[error("incompatible shapes: {detail}")]
    ShapeMismatch { detail: String },

    /// A check that should have produced a certificate could not.
    #[error("verification failed: {detail} (residual {residual:.3e})")]
    VerificationFailed { detail: String, residual: f64 },
}

impl Error {
    pub(crate) fn invalid(detail: impl Into<String>) -> Self {
        Error::InvalidParameter {
            detail: detail.into(),
        }
    }

    pub(crate) fn shape(detail: impl Into<String>) -> Self {
        Error::ShapeMismatch {
            detail: detail.into(),
        }
    }
}
