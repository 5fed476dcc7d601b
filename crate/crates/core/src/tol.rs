//! Pinned tolerance constants.
//!
//! Every numerical acceptance threshold in the crate is one of these
//! constants (possibly scaled by a caller-supplied factor). They are
//! grouped by what they bound, strictest first; the hierarchy between the
//! "pass" family (≤ 1e-8) and the negative-control floor (≥ 1e-2) is what
//! makes verdicts unambiguous: six orders of magnitude separate them.

/// Exact-structure residuals: Lorentz metric preservation, mass-shell
/// membership, group-law identities that hold by construction.
pub const EXACT_STRUCTURE: f64 = 1e-12;

/// Modular identities: the reflection identity `J Δ J = Δ⁻¹`, the
/// involution `S² = 1`, unitarity of flow comparison operators.
pub const MODULAR_IDENTITY: f64 = 1e-10;

/// Geometric/subspace equalities: canonical wedge data, subspace equality
/// and containment defects, transported modular data, flow geometry and
/// duality at the base wedge.
pub const SUBSPACE_EQUALITY: f64 = 1e-9;

/// Algebra membership residuals (relative to the element's norm) and
/// hypothesis thresholds of the implication pipeline.
pub const MEMBERSHIP: f64 = 1e-8;

/// Multiplier applied to a *measured* wrap defect when a check runs at a
/// translated wedge, where the single controlled lattice approximation
/// enters.
pub const WRAP_FACTOR: f64 = 10.0;

/// Negative controls must fail at least this badly; anything between this
/// and [`MEMBERSHIP`] would be ambiguous and is treated as a test failure.
pub const NEGATIVE_CONTROL_FLOOR: f64 = 1e-2;

/// Relative singular-value threshold for numerical rank decisions.
pub const RANK_RELATIVE: f64 = 1e-9;

/// Eigenvalue threshold (relative to the largest) below which a
/// constraint-matrix eigenvalue counts as part of the nullspace. The
/// squared-residual construction of the constraint Gram matrix squares the
/// raw separation, so genuine nullspace entries sit near machine noise
/// (≲ 1e-14) while the smallest genuine non-null eigenvalues stay ≳ 1e-12;
/// 1e-10 splits the two decades-wide.
pub const NULLSPACE_RELATIVE: f64 = 1e-10;

/// Minimum pairwise gap (in phase distance) the separating translation
/// diagonals must achieve before the orbit combinatorics of the
/// structured commutant engine are trusted.
pub const SEPARATION_GAP: f64 = 1e-6;
