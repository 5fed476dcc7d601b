//! The wedge-covariant net of real subspaces carried by a lattice
//! representation, and the property checks that run against it.
//!
//! The net assigns to every wedge `W` reachable from the standard right
//! wedge `W1 = {x : x1 > |x0|}` by the implemented symmetry subgroup
//! (translations, `x0`–`x1` boosts, transverse rotations by `2π/k`, and
//! the edge reflection) the subspace
//!
//! ```text
//! H(g·W1) = U(g) · H(W1)
//! ```
//!
//! where `H(W1)` is the standard subspace built spectrally from the boost
//! generator and the modular reflection ([`LatticeRep::spectral_pair`]).
//! Edge translations act trivially on `H(W1)` (exactly), so the
//! assignment depends only on the wedge, not on the group element chosen
//! to reach it.
//!
//! The checks measure, with explicit tolerances:
//!
//! * **flow–geometry** (the Bisognano–Wichmann property): the modular
//!   flow of `H(W)` against the reversed wedge boost `U(Λ_W(-2πt))` —
//!   exact at `W1` and `W1'`, wrap-limited at translated wedges;
//! * **duality**: `H(W') = H(W)'` (symplectic complement), plus the
//!   equivalent reflection form `J·H(W) = H(W')`;
//! * **covariance** and **locality** of the assignment;
//! * **isotony**, which a finite-rank model can only satisfy up to the
//!   translation granularity — the check reports the measured defect
//!   against that bound and says so.

use nalgebra::Vector4;
use rand::Rng;

use crate::geometry::{self, Inclusion, Poincare, Wedge};
use crate::lattice::LatticeRep;
use crate::linalg::{op_norm, real_from_complex_op, CMat};
use crate::report::{CheckRecord, SolverPath};
use crate::subspace::{RealSubspace, SpectralModularPair};
use crate::tol;
use crate::{Error, Result};

/// Position of a wedge within the reachable family: a translate of the
/// standard right wedge or of its causal complement.
#[derive(Debug, Clone)]
pub struct WedgeLocation {
    /// `true` if the wedge is a translate of the *complement* `W1'`.
    pub flipped: bool,
    /// The (edge-reduced) translation part.
    pub offset: Vector4<f64>,
}

impl WedgeLocation {
    /// Short identifier used in check records.
    pub fn id(&self) -> String {
        let base = if self.flipped { "W1'" } else { "W1" };
        if self.offset.norm() < 1e-12 {
            base.to_string()
        } else {
            format!(
                "{base}+[{:.3},{:.3},{:.3},{:.3}]",
                self.offset[0], self.offset[1], self.offset[2], self.offset[3]
            )
        }
    }
}

/// The net: one lattice representation plus the standard subspace of the
/// right wedge, with covariant assignment and property checks.
#[derive(Debug, Clone)]
pub struct WedgeNet {
    rep: LatticeRep,
    pair: SpectralModularPair,
    h1: RealSubspace,
}

impl WedgeNet {
    pub fn new(rep: LatticeRep) -> Result<Self> {
        let pair = rep.spectral_pair();
        let h1 = pair.standard_subspace()?;
        Ok(WedgeNet { rep, pair, h1 })
    }

    pub fn rep(&self) -> &LatticeRep {
        &self.rep
    }

    pub fn pair(&self) -> &SpectralModularPair {
        &self.pair
    }

    /// The subspace of the standard right wedge.
    pub fn standard_subspace(&self) -> &RealSubspace {
        &self.h1
    }

    /// Locate a wedge within the reachable family.
    pub fn locate(&self, w: &Wedge) -> Result<WedgeLocation> {
        let offset = w.offset();
        let candidate = Wedge::standard_right().translated(&offset);
        if w.same_as(&candidate, 1e-9) {
            return Ok(WedgeLocation {
                flipped: false,
                offset,
            });
        }
        if w.same_as(&candidate.causal_complement(), 1e-9) {
            return Ok(WedgeLocation {
                flipped: true,
                offset,
            });
        }
        Err(Error::UnreachableWedge {
            detail: format!(
                "{} is not a translate of the standard right wedge or its complement",
                w.describe()
            ),
        })
    }

    /// The unitary carrying `H(W1)` to `H(W)`.
    fn mover(&self, loc: &WedgeLocation) -> CMat {
        let mut u = if loc.flipped {
            self.rep.wedge_flip()
        } else {
            CMat::identity(self.rep.dim(), self.rep.dim())
        };
        if loc.offset.norm() > 0.0 {
            u = self.rep.translation(&loc.offset) * u;
        }
        u
    }

    /// The net's subspace at a reachable wedge.
    pub fn subspace(&self, w: &Wedge) -> Result<RealSubspace> {
        let loc = self.locate(w)?;
        self.h1.transported(&real_from_complex_op(&self.mover(&loc)))
    }

    /// Modular flow `Δ_{H(W)}^{it}` of the wedge subspace, obtained by
    /// unitary transport of the spectral flow at `W1`.
    pub fn modular_flow(&self, w: &Wedge, t: f64) -> Result<CMat> {
        let loc = self.locate(w)?;
        let u = self.mover(&loc);
        Ok(&u * self.pair.delta_flow(t) * u.adjoint())
    }

    /// The reversed one-parameter boost group of the wedge,
    /// `U(Λ_W(-2πt))`, evaluated in normal form `T(b)·Λ1(s)`.
    pub fn geometric_flow(&self, w: &Wedge, t: f64) -> Result<CMat> {
        let loc = self.locate(w)?;
        // Λ_{gW1}(σ) = g Λ1(σ) g^{-1}; the reflection inverts the boost.
        let s = if loc.flipped {
            2.0 * std::f64::consts::PI * t
        } else {
            -2.0 * std::f64::consts::PI * t
        };
        let b = loc.offset - geometry::standard_boost(s) * loc.offset;
        Ok(self.rep.translation(&b) * self.rep.boost(s))
    }

    /// Flow–geometry (Bisognano–Wichmann) check: compare the modular flow
    /// of `H(W)` with the reversed wedge boost at each time in `times`.
    ///
    /// At `W1`, `W1'`, and their edge translates the identification is
    /// exact and measured against [`tol::MODULAR_IDENTITY`]. At wedges
    /// translated in the boost plane the cyclic rapidity wrap is the sole
    /// obstruction; those rows are measured against
    /// [`tol::WRAP_FACTOR`] times the independently measured wrap defect
    /// and the note records that calibration.
    pub fn check_flow_geometry(&self, w: &Wedge, times: &[f64]) -> Result<Vec<CheckRecord>> {
        let loc = self.locate(w)?;
        let exact = loc.offset.norm() < 1e-12;
        let mut rows = Vec::with_capacity(times.len());
        for &t in times {
            let residual = op_norm(&(self.modular_flow(w, t)? - self.geometric_flow(w, t)?));
            let row = if exact {
                CheckRecord::bounded(
                    "flow-geometry",
                    loc.id(),
                    format!("t={t}"),
                    residual,
                    tol::MODULAR_IDENTITY,
                    SolverPath::Analytic,
                )
                .with_note("exact: spectral flow vs reversed boost")
            } else {
                let s = if loc.flipped {
                    2.0 * std::f64::consts::PI * t
                } else {
                    -2.0 * std::f64::consts::PI * t
                };
                let wrap = self.rep.boost_translation_defect(s, &loc.offset);
                CheckRecord::bounded(
                    "flow-geometry",
                    loc.id(),
                    format!("t={t}"),
                    residual,
                    tol::WRAP_FACTOR * wrap + tol::MODULAR_IDENTITY,
                    SolverPath::Dense,
                )
                .with_note(format!(
                    "wrap-calibrated: measured boost/translation wrap defect {wrap:.3e}"
                ))
            };
            rows.push(row);
        }
        Ok(rows)
    }

    /// Wedge duality: `H(W')` equals the symplectic complement of `H(W)`,
    /// and equivalently the modular reflection of `H(W)` is `H(W')`.
    pub fn check_duality(&self, w: &Wedge) -> Result<Vec<CheckRecord>> {
        let loc = self.locate(w)?;
        let h_w = self.subspace(w)?;
        let h_comp = self.subspace(&w.causal_complement())?;
        let dual = h_w.symplectic_complement().distance_to(&h_comp);
        let u = self.mover(&loc);
        let u_real = real_from_complex_op(&u);
        // J_{H(W)} = U J1 U^{-1} by transport.
        let j_w = &u_real * &self.pair.j_real * u_real.transpose();
        let reflected = h_w.transported(&j_w)?;
        let refl = reflected.distance_to(&h_comp);
        Ok(vec![
            CheckRecord::bounded(
                "duality",
                loc.id(),
                "-",
                dual,
                tol::SUBSPACE_EQUALITY,
                SolverPath::Dense,
            )
            .with_note("H(W') vs symplectic complement of H(W)"),
            CheckRecord::bounded(
                "duality-reflection",
                loc.id(),
                "-",
                refl,
                tol::SUBSPACE_EQUALITY,
                SolverPath::Dense,
            )
            .with_note("J_W · H(W) vs H(W')"),
        ])
    }

    /// Covariance of the assignment: `U(g)·H(W1) = H(g·W1)` for each
    /// labelled group element.
    pub fn check_covariance(&self, elements: &[(String, Poincare)]) -> Result<Vec<CheckRecord>> {
        let w1 = Wedge::standard_right();
        let mut rows = Vec::with_capacity(elements.len());
        for (label, g) in elements {
            let u = self.rep.evaluate(g)?;
            let moved = self.h1.transported(&real_from_complex_op(&u))?;
            let w_g = w1.transformed(g)?;
            let assigned = self.subspace(&w_g)?;
            let residual = moved.distance_to(&assigned);
            rows.push(
                CheckRecord::bounded(
                    "covariance",
                    self.locate(&w_g)?.id(),
                    label.clone(),
                    residual,
                    tol::SUBSPACE_EQUALITY,
                    SolverPath::Dense,
                )
                .with_note("U(g)·H(W1) vs H(g·W1)"),
            );
        }
        Ok(rows)
    }

    /// A default covariance sample: a boost, the rotation step, the edge
    /// reflection, a generic translation and an edge translation.
    pub fn default_covariance_elements(&self) -> Vec<(String, Poincare)> {
        vec![
            (
                "boost(0.7)".to_string(),
                Poincare::from_lorentz(geometry::standard_boost(0.7)).expect("boost is Lorentz"),
            ),
            (
                "rotation-step".to_string(),
                Poincare::from_lorentz(geometry::rotation_in_plane_23(
                    2.0 * std::f64::consts::PI / self.rep.config().k as f64,
                ))
                .expect("rotation is Lorentz"),
            ),
            (
                "edge-reflection".to_string(),
                Poincare::from_lorentz(geometry::rotation_in_plane_12(std::f64::consts::PI))
                    .expect("reflection is Lorentz"),
            ),
            (
                "translation(0.3,0.2,0.1,-0.4)".to_string(),
                Poincare::translation(Vector4::new(0.3, 0.2, 0.1, -0.4)),
            ),
            (
                "edge-translation(0,0,0.5,-0.3)".to_string(),
                Poincare::translation(Vector4::new(0.0, 0.0, 0.5, -0.3)),
            ),
        ]
    }

    /// Locality: the symplectic form vanishes between `H(W)` and the
    /// subspace of the causal complement.
    pub fn check_locality(&self, w: &Wedge) -> Result<CheckRecord> {
        let loc = self.locate(w)?;
        let h_w = self.subspace(w)?;
        let h_comp = self.subspace(&w.causal_complement())?;
        let residual = h_w.symplectic_complement().containment_defect_of(&h_comp);
        Ok(CheckRecord::bounded(
            "locality",
            loc.id(),
            "-",
            residual,
            tol::SUBSPACE_EQUALITY,
            SolverPath::Dense,
        )
        .with_note("H(W') sits inside the symplectic complement of H(W)"))
    }

    /// Isotony along a future-pointing null shift of the standard wedge:
    /// `W1 + s·u ⊂ W1` for `u = (1,1,0,0)/√2`, `s > 0`.
    ///
    /// A finite-rank net cannot realize a strict inclusion (both
    /// subspaces have full real dimension), so the containment defect is
    /// measured against the translation granularity
    /// `‖U(T(s·u)) - 1‖`, which bounds it trivially; the row documents
    /// the size of the unavoidable defect rather than certifying a
    /// property the truncation cannot have.
    pub fn check_isotony<R: Rng>(&self, shift: f64, rng: &mut R) -> Result<Vec<CheckRecord>> {
        if shift <= 0.0 {
            return Err(Error::invalid("isotony shift must be positive"));
        }
        let u_null = Vector4::new(1.0, 1.0, 0.0, 0.0) / 2.0_f64.sqrt();
        let a = shift * u_null;
        let w1 = Wedge::standard_right();
        let w_in = w1.translated(&a);
        // Geometric sanity: the shifted wedge really is contained.
        let inclusion = w_in.inclusion_in(&w1, rng, 64);
        let geo_ok = matches!(inclusion, Inclusion::Holds);
        let h_outer = self.h1.clone();
        let h_inner = self.subspace(&w_in)?;
        let defect = h_outer.containment_defect_of(&h_inner);
        let granularity = op_norm(
            &(self.rep.translation(&a) - CMat::identity(self.rep.dim(), self.rep.dim())),
        );
        let geo_row = CheckRecord::bounded(
            "isotony-geometric",
            self.locate(&w_in)?.id(),
            format!("s={shift}"),
            if geo_ok { 0.0 } else { 1.0 },
            0.5,
            SolverPath::Analytic,
        )
        .with_note("null-shifted wedge is geometrically contained in W1");
        let net_row = CheckRecord::bounded(
            "isotony-defect",
            self.locate(&w_in)?.id(),
            format!("s={shift}"),
            defect,
            granularity + tol::SUBSPACE_EQUALITY,
            SolverPath::Dense,
        )
        .with_note(format!(
            "informational: finite rank forces H(W1+su) ≈ H(W1); defect vs translation granularity {granularity:.3e}"
        ));
        Ok(vec![geo_row, net_row])
    }

    /// Standardness of the wedge subspace, as a check row.
    ///
    /// The primary certificate is spectral: the subspace has real
    /// dimension `n` in `C^n` and its defining pair satisfies the
    /// involution, antilinearity, and exchange identities to working
    /// precision — which makes it standard by construction. The dense
    /// rank-based classifier corroborates this only where it can: its
    /// margins decay like `e^{-π κ_max}`, so on sharply-peaked modular
    /// spectra they drop below the rank threshold and the dense route is
    /// recorded as out of reach rather than counted as a failure.
    pub fn check_standardness(&self) -> CheckRecord {
        let construction = self
            .pair
            .involution_residual()
            .max(self.pair.antilinearity_residual())
            .max(self.pair.anti_symmetry_residual());
        let dim_ok = self.h1.real_dim() == self.rep.dim();
        let kappa_max = self
            .pair
            .kappa
            .iter()
            .fold(0.0_f64, |acc, &k| acc.max(k.abs()));
        let dense_margin_scale = (-std::f64::consts::PI * kappa_max).exp();
        let dense_resolvable = dense_margin_scale > 10.0 * tol::RANK_RELATIVE;
        let (residual, note) = if !dim_ok {
            (
                1.0,
                format!(
                    "real dim {} differs from {} — not a candidate standard subspace",
                    self.h1.real_dim(),
                    self.rep.dim()
                ),
            )
        } else if dense_resolvable {
            let cls = self.h1.classify();
            let margin = cls.cyclic_margin.min(cls.separating_margin);
            (
                construction + if cls.is_standard() { 0.0 } else { 1.0 },
                format!(
                    "spectral certificate residual {construction:.3e}; dense corroboration: \
                     cyclic={} separating={} margin={margin:.3e} (real dim {} of {})",
                    cls.cyclic,
                    cls.separating,
                    self.h1.real_dim(),
                    2 * self.rep.dim()
                ),
            )
        } else {
            (
                construction,
                format!(
                    "spectral certificate residual {construction:.3e}; dense margins \
                     ≈ {dense_margin_scale:.1e} are below rank resolution at κ_max = \
                     {kappa_max:.2} — spectral route only (real dim {} of {})",
                    self.h1.real_dim(),
                    2 * self.rep.dim()
                ),
            )
        };
        CheckRecord::bounded(
            "standardness",
            "W1",
            "-",
            residual,
            tol::MODULAR_IDENTITY,
            if dense_resolvable {
                SolverPath::Dense
            } else {
                SolverPath::Analytic
            },
        )
        .with_note(note)
    }
}
