//! Desk-scale numerical laboratory for nets of standard real subspaces.
//!
//! The crate builds finite-dimensional momentum-lattice models of
//! positive-energy representations, turns them into wedge-indexed nets of
//! real subspaces via the fixed-point construction from a boost generator
//! and a wedge reflection, and then *measures* the modular-theoretic
//! properties of the result: modular flow identities, the geometric action
//! of modular groups on wedge subspaces, wedge duality, and an algebraic
//! membership condition on the wedge reflection that decides between the
//! geometric and the non-geometric behaviour.
//!
//! Modules, bottom-up:
//!
//! * [`geometry`] — Minkowski vectors, Poincaré group elements, wedge
//!   regions in canonical form, orbit partitions of finite index grids.
//! * [`subspace`] — real subspaces of a complexified `R^{2n}`, cyclicity /
//!   separation classification, the modular operator pair `(J, Δ)` of a
//!   standard subspace, spectral functional calculus, and transport along
//!   (anti)unitaries.
//! * [`algebra`] — finite-dimensional commutant / bicommutant engines: a
//!   dense one built from plain linear algebra and a structured one built
//!   from orbit combinatorics of diagonal + permutation generator sets,
//!   each usable as a cross-check of the other.
//! * [`lattice`] — cyclic rapidity lattices on a mass hyperboloid and the
//!   exact symmetry representation they carry (signed-shift boost step,
//!   transverse rotations, reflections, translation diagonals).
//! * [`net`] — the wedge-covariant net of subspaces generated from a base
//!   subspace, with axiom, flow-geometry, and duality checks.
//! * [`modularity`] — the flow-comparison one-parameter family `Z`, the
//!   membership condition on the wedge reflection, the implication
//!   pipeline that ties membership to flow geometry + duality, and the
//!   mass-spectrum classifier for the direct-sum reduction.
//! * [`counterexample`] — the tensor-product mechanism that breaks the
//!   geometric behaviour: an orthogonal companion representation glued to
//!   a healthy lattice net, with a closed-form oracle for the deviation.
//!
//! Everything is double precision and deliberately small; tolerance
//! constants live in [`tol`].

pub mod algebra;
pub mod counterexample;
pub mod error;
pub mod geometry;
pub mod lattice;
pub mod linalg;
pub mod modularity;
pub mod net;
pub mod report;
pub mod subspace;
pub mod tol;

pub use error::Error;
pub use report::{CheckRecord, SolverPath};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
