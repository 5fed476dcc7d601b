//! Shared check-record type: one measured quantity compared to one bound.
//!
//! Every verification routine in the crate reports its findings as
//! [`CheckRecord`] rows so that library callers, the acceptance suite and
//! the command-line runner all see the same shape.

use std::fmt;

/// Which engine produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverPath {
    /// Closed-form / spectral evaluation, no linear-system solving.
    Analytic,
    /// Dense linear algebra on explicit matrices.
    Dense,
    /// Orbit-combinatorics on diagonal + permutation structure.
    Structured,
    /// Word-span closure (small-dimension oracle).
    WordSpan,
}

impl fmt::Display for SolverPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SolverPath::Analytic => "analytic",
            SolverPath::Dense => "dense",
            SolverPath::Structured => "structured",
            SolverPath::WordSpan => "word-span",
        };
        f.write_str(s)
    }
}

/// One check: a named residual measured against a tolerance.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    /// Which check produced the row, e.g. `flow-geometry`, `duality`.
    pub check_name: String,
    /// Wedge the check ran at (`W1`, `W1'`, `W1+a[...]`, `-` when global).
    pub wedge_id: String,
    /// Free parameter of the check (a flow time, a sample index), `-` if none.
    pub parameter: String,
    /// Measured residual.
    pub residual: f64,
    /// Bound the residual was compared against.
    pub tolerance: f64,
    /// Whether the row passes. For expected-failure rows (negative
    /// controls, the deliberate counterexample deviation) `pass` means
    /// "behaved as predicted" and `notes` says so.
    pub pass: bool,
    /// Engine that produced the number.
    pub solver_path: SolverPath,
    /// Human-readable qualifiers (certificates, expected-failure markers).
    pub notes: String,
}

impl CheckRecord {
    /// Row that passes iff `residual <= tolerance`.
    pub fn bounded(
        check_name: impl Into<String>,
        wedge_id: impl Into<String>,
        parameter: impl Into<String>,
        residual: f64,
        tolerance: f64,
        solver_path: SolverPath,
    ) -> Self {
        CheckRecord {
            check_name: check_name.into(),
            wedge_id: wedge_id.into(),
            parameter: parameter.into(),
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
            solver_path,
            notes: String::new(),
        }
    }

    /// Attach a note, chaining.
    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes = note.into();
        self
    }

    /// Override the verdict (expected-failure harness rows).
    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}
