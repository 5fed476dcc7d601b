//! Minkowski geometry: four-vectors, Poincaré transformations, and wedge
//! regions in canonical form.
//!
//! Metric signature is `diag(+1,-1,-1,-1)` throughout. A wedge is stored by
//! its two forward-pointing null normals (scaled so the time component is 1)
//! together with an offset that is reduced modulo the edge plane, so two
//! wedges are equal as point sets iff their stored data agree. The anchor
//! region is the standard right wedge `{ x : x1 > |x0| }`, whose normals are
//! `(1, 1, 0, 0)` and `(1, -1, 0, 0)`; a point `x` lies in a wedge with
//! offset `o` iff
//!
//! ```text
//! <x - o, plus> < 0   and   <x - o, minus> > 0
//! ```
//!
//! (both inequalities checked in the Minkowski inner product). Every wedge
//! carries a canonical Poincaré `frame` mapping the standard right wedge onto
//! it, which in turn induces canonical one-parameter boosts, an edge
//! reflection, and the (non-orthochronous) modular reflection for that wedge.

use nalgebra::{Matrix4, Vector4};
use rand::Rng;

use crate::linalg::{lorentz_defect, orthogonal_complement, RMat, RVec};
use crate::tol;
use crate::{Error, Result};

/// Minkowski inner product with signature `(+,-,-,-)`.
pub fn minkowski_inner(a: &Vector4<f64>, b: &Vector4<f64>) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

/// The metric tensor as a matrix.
pub fn eta() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

/// Boost in the `(x0, x1)` plane with the given rapidity.
pub fn standard_boost(rapidity: f64) -> Matrix4<f64> {
    let (c, s) = (rapidity.cosh(), rapidity.sinh());
    let mut m = Matrix4::identity();
    m[(0, 0)] = c;
    m[(0, 1)] = s;
    m[(1, 0)] = s;
    m[(1, 1)] = c;
    m
}

/// Rotation in the `(x2, x3)` plane (fixes `x0`, `x1`).
pub fn rotation_in_plane_23(angle: f64) -> Matrix4<f64> {
    let (c, s) = (angle.cos(), angle.sin());
    let mut m = Matrix4::identity();
    m[(2, 2)] = c;
    m[(2, 3)] = -s;
    m[(3, 2)] = s;
    m[(3, 3)] = c;
    m
}

/// Rotation in the `(x1, x2)` plane (fixes `x0`, `x3`).
pub fn rotation_in_plane_12(angle: f64) -> Matrix4<f64> {
    let (c, s) = (angle.cos(), angle.sin());
    let mut m = Matrix4::identity();
    m[(1, 1)] = c;
    m[(1, 2)] = -s;
    m[(2, 1)] = s;
    m[(2, 2)] = c;
    m
}

/// Rotation in the `(x1, x3)` plane (fixes `x0`, `x2`).
pub fn rotation_in_plane_13(angle: f64) -> Matrix4<f64> {
    let (c, s) = (angle.cos(), angle.sin());
    let mut m = Matrix4::identity();
    m[(1, 1)] = c;
    m[(1, 3)] = -s;
    m[(3, 1)] = s;
    m[(3, 3)] = c;
    m
}

/// Simultaneous sign flip of `x0` and `x1`: the point reflection through the
/// edge of the standard right wedge restricted to the `(x0, x1)` plane. Not
/// orthochronous; it is implemented antiunitarily on representations.
pub fn standard_modular_reflection() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(-1.0, -1.0, 1.0, 1.0))
}

/// An affine Poincaré transformation `x -> lorentz * x + translation`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poincare {
    pub lorentz: Matrix4<f64>,
    pub translation: Vector4<f64>,
}

impl Poincare {
    pub fn identity() -> Self {
        Self {
            lorentz: Matrix4::identity(),
            translation: Vector4::zeros(),
        }
    }

    pub fn translation(a: Vector4<f64>) -> Self {
        Self {
            lorentz: Matrix4::identity(),
            translation: a,
        }
    }

    pub fn from_lorentz(lambda: Matrix4<f64>) -> Result<Self> {
        let residual = lorentz_defect(&lambda);
        if residual > tol::EXACT_STRUCTURE {
            return Err(Error::NotLorentz {
                residual,
                tolerance: tol::EXACT_STRUCTURE,
            });
        }
        Ok(Self {
            lorentz: lambda,
            translation: Vector4::zeros(),
        })
    }

    /// Apply to a point.
    pub fn apply(&self, x: &Vector4<f64>) -> Vector4<f64> {
        self.lorentz * x + self.translation
    }

    /// Group product: `self` after `other` (`(self * other)(x) = self(other(x))`).
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            lorentz: self.lorentz * other.lorentz,
            translation: self.lorentz * other.translation + self.translation,
        }
    }

    /// Group inverse, using `L^{-1} = eta L^T eta` for the Lorentz part.
    pub fn inverse(&self) -> Self {
        let linv = eta() * self.lorentz.transpose() * eta();
        Self {
            lorentz: linv,
            translation: -(linv * self.translation),
        }
    }

    /// Whether the Lorentz part preserves the direction of time.
    pub fn is_orthochronous(&self) -> bool {
        self.lorentz[(0, 0)] > 0.0
    }
}

/// Outcome of a wedge inclusion test.
#[derive(Debug, Clone, PartialEq)]
pub enum Inclusion {
    /// Certified algebraically (parallel wedges, offset in the right cone).
    Holds,
    /// Refuted: the witness point lies in the candidate subset but not the
    /// candidate superset, with at least the recorded margin.
    Fails { witness: Vector4<f64>, margin: f64 },
    /// Neither certified nor refuted by the sampling budget.
    Undecided,
}

/// A wedge region in canonical form. Construct via [`Wedge::new`],
/// [`Wedge::standard_right`], or by transforming an existing wedge; the
/// canonicalization invariants are maintained by every constructor.
#[derive(Debug, Clone)]
pub struct Wedge {
    plus: Vector4<f64>,
    minus: Vector4<f64>,
    offset: Vector4<f64>,
}

impl Wedge {
    /// Canonicalize and validate a pair of null normals and an offset.
    ///
    /// Accepts normals scaled arbitrarily and possibly backward-pointing
    /// (a joint sign flip swaps the roles of the two normals, which is how
    /// non-orthochronous maps act on wedges).
    pub fn new(plus: Vector4<f64>, minus: Vector4<f64>, offset: Vector4<f64>) -> Result<Self> {
        let mut p = plus;
        let mut m = minus;
        if p[0] == 0.0 || m[0] == 0.0 {
            return Err(Error::invalid(
                "wedge normal has vanishing time component".to_string(),
            ));
        }
        if p[0] < 0.0 && m[0] < 0.0 {
            // Backward pair: flip both and swap roles (a flipped normal
            // reverses its membership inequality).
            let t = -p;
            p = -m;
            m = t;
        } else if p[0] * m[0] < 0.0 {
            return Err(Error::invalid(
                "wedge normals point to opposite time directions".to_string(),
            ));
        }
        p /= p[0];
        m /= m[0];
        for (name, n) in [("plus", &p), ("minus", &m)] {
            let null_defect = minkowski_inner(n, n).abs();
            if null_defect > tol::EXACT_STRUCTURE * n.norm_squared() {
                return Err(Error::invalid(format!(
                    "{name} normal is not null (defect {null_defect:.3e})"
                )));
            }
        }
        let cross = minkowski_inner(&p, &m);
        if cross <= tol::EXACT_STRUCTURE {
            return Err(Error::invalid(format!(
                "wedge normals are parallel (pairing {cross:.3e})"
            )));
        }
        let mut w = Self {
            plus: p,
            minus: m,
            offset,
        };
        w.offset = w.reduce_offset(&offset);
        Ok(w)
    }

    /// The standard right wedge `{ x : x1 > |x0| }`.
    pub fn standard_right() -> Self {
        Self {
            plus: Vector4::new(1.0, 1.0, 0.0, 0.0),
            minus: Vector4::new(1.0, -1.0, 0.0, 0.0),
            offset: Vector4::zeros(),
        }
    }

    pub fn plus_normal(&self) -> Vector4<f64> {
        self.plus
    }

    pub fn minus_normal(&self) -> Vector4<f64> {
        self.minus
    }

    pub fn offset(&self) -> Vector4<f64> {
        self.offset
    }

    /// Euclidean-orthonormal basis of the edge plane
    /// `{ v : <v, plus> = <v, minus> = 0 }` (a spacelike 2-plane).
    fn edge_plane_basis(&self) -> RMat {
        let g = eta();
        let gp = g * self.plus;
        let gm = g * self.minus;
        let a = RMat::from_fn(4, 2, |i, j| if j == 0 { gp[i] } else { gm[i] });
        orthogonal_complement(&a, tol::RANK_RELATIVE)
    }

    /// Remove the edge-plane component of an offset (Euclidean projection),
    /// the canonical representative of the offset modulo edge translations.
    fn reduce_offset(&self, o: &Vector4<f64>) -> Vector4<f64> {
        let basis = self.edge_plane_basis();
        let ov = RVec::from_iterator(4, o.iter().copied());
        let proj = &basis * (basis.transpose() * &ov);
        Vector4::from_fn(|i, _| ov[i] - proj[i])
    }

    /// Strict membership with a margin: both defining inequalities hold by at
    /// least `margin`. Use `margin = 0.0` for plain membership.
    pub fn contains(&self, x: &Vector4<f64>, margin: f64) -> bool {
        let d = x - self.offset;
        minkowski_inner(&d, &self.plus) < -margin && minkowski_inner(&d, &self.minus) > margin
    }

    /// Signed distance-like membership score: the worst of the two defining
    /// inequalities (positive inside, negative outside).
    pub fn membership_margin(&self, x: &Vector4<f64>) -> f64 {
        let d = x - self.offset;
        (-minkowski_inner(&d, &self.plus)).min(minkowski_inner(&d, &self.minus))
    }

    /// The causal complement: same edge, opposite side. Swapping the two
    /// normals reverses both membership inequalities.
    pub fn causal_complement(&self) -> Self {
        Self {
            plus: self.minus,
            minus: self.plus,
            offset: self.offset,
        }
    }

    /// Image of this wedge under a Poincaré transformation.
    pub fn transformed(&self, g: &Poincare) -> Result<Self> {
        Wedge::new(
            g.lorentz * self.plus,
            g.lorentz * self.minus,
            g.apply(&self.offset),
        )
    }

    /// Translate by `a`.
    pub fn translated(&self, a: &Vector4<f64>) -> Self {
        let mut w = self.clone();
        w.offset = w.reduce_offset(&(self.offset + a));
        w
    }

    /// Whether two wedges coincide as point sets, to the given tolerance on
    /// their canonical data.
    pub fn same_as(&self, other: &Self, tolerance: f64) -> bool {
        (self.plus - other.plus).norm() <= tolerance
            && (self.minus - other.minus).norm() <= tolerance
            && (self.offset - other.offset).norm() <= tolerance
    }

    /// Whether `other` is this wedge's causal complement as a point set.
    pub fn is_complement_of(&self, other: &Self, tolerance: f64) -> bool {
        self.same_as(&other.causal_complement(), tolerance)
    }

    /// Canonical Poincaré transformation mapping the standard right wedge
    /// onto this wedge. Its Lorentz part is proper orthochronous and sends
    /// the standard normals to (positive multiples of) this wedge's normals.
    pub fn frame(&self) -> Poincare {
        let x = minkowski_inner(&self.plus, &self.minus);
        let scale = (2.0 * x).sqrt();
        let u = (self.plus + self.minus) / scale;
        let v = (self.plus - self.minus) / scale;
        // Euclidean-orthonormal basis of the edge plane, then Minkowski
        // orthonormalization within it (the plane is spacelike, so the
        // restricted form is negative definite).
        let basis = self.edge_plane_basis();
        let c1 = Vector4::from_fn(|i, _| basis[(i, 0)]);
        let c2 = Vector4::from_fn(|i, _| basis[(i, 1)]);
        let mut w1 = c1 / (-minkowski_inner(&c1, &c1)).sqrt();
        let mut w2 = c2 + minkowski_inner(&c2, &w1) * w1;
        w2 /= (-minkowski_inner(&w2, &w2)).sqrt();
        // Deterministic sign convention: largest-magnitude entry positive.
        for w in [&mut w1, &mut w2] {
            let lead = (0..4).max_by(|&a, &b| w[a].abs().partial_cmp(&w[b].abs()).unwrap());
            if let Some(k) = lead {
                if w[k] < 0.0 {
                    *w = -*w;
                }
            }
        }
        let mut r = Matrix4::from_columns(&[u, v, w1, w2]);
        if r.determinant() < 0.0 {
            let flipped = -w2;
            r.set_column(3, &flipped);
        }
        Poincare {
            lorentz: r,
            translation: self.offset,
        }
    }

    /// One-parameter boost group attached to this wedge: the standard boost
    /// conjugated by the canonical frame. Leaves the wedge invariant.
    pub fn boost(&self, rapidity: f64) -> Poincare {
        let g = self.frame();
        g.compose(&Poincare {
            lorentz: standard_boost(rapidity),
            translation: Vector4::zeros(),
        })
        .compose(&g.inverse())
    }

    /// Proper orthochronous rotation by pi about the wedge's edge, mapping
    /// the wedge onto its causal complement. For the standard right wedge
    /// this is the rotation by pi in the `(x1, x2)` plane; for a general
    /// wedge that choice is conjugated by the canonical frame. (Any other
    /// edge-fixing rotation differs by an element of the wedge's stabilizer;
    /// consumers check insensitivity to this choice where it matters.)
    pub fn edge_reflection(&self) -> Poincare {
        let g = self.frame();
        g.compose(&Poincare {
            lorentz: rotation_in_plane_12(std::f64::consts::PI),
            translation: Vector4::zeros(),
        })
        .compose(&g.inverse())
    }

    /// The non-orthochronous reflection through the wedge's edge plane
    /// (sign flip of the time and normal directions in the wedge frame).
    /// Implemented antiunitarily on representations; geometrically it maps
    /// the wedge onto its causal complement.
    pub fn modular_reflection(&self) -> Poincare {
        let g = self.frame();
        g.compose(&Poincare {
            lorentz: standard_modular_reflection(),
            translation: Vector4::zeros(),
        })
        .compose(&g.inverse())
    }

    /// Sample interior points, roughly uniform over a box of the given scale
    /// in the wedge's own frame, at depth at least `0.05 * scale` from the
    /// boundary.
    pub fn sample_interior<R: Rng>(&self, rng: &mut R, count: usize, scale: f64) -> Vec<Vector4<f64>> {
        let g = self.frame();
        (0..count)
            .map(|_| {
                let y0 = scale * (2.0 * rng.random::<f64>() - 1.0);
                let y1 = y0.abs() + scale * (0.05 + rng.random::<f64>());
                let y2 = scale * (2.0 * rng.random::<f64>() - 1.0);
                let y3 = scale * (2.0 * rng.random::<f64>() - 1.0);
                g.apply(&Vector4::new(y0, y1, y2, y3))
            })
            .collect()
    }

    /// Decide whether `self` is contained in `other`.
    ///
    /// Parallel wedges (equal canonical normals) are decided exactly: with
    /// offset difference `c`, containment holds iff `<c, plus> <= 0` and
    /// `<c, minus> >= 0`. Antiparallel wedges (normals swapped) never
    /// contain one another — each contains translates of the other's
    /// reversed recession cone. Otherwise the inclusion is probed by
    /// sampling: a sampled interior point of `self` outside `other` refutes
    /// it with a quantified margin; if no witness is found the result is
    /// `Undecided`.
    pub fn inclusion_in<R: Rng>(&self, other: &Self, rng: &mut R, samples: usize) -> Inclusion {
        let ntol = tol::EXACT_STRUCTURE;
        let witness_at = |x: Vector4<f64>| -> Option<Inclusion> {
            let inside_self = self.membership_margin(&x);
            let outside_other = -other.membership_margin(&x);
            if inside_self > 1e-9 && outside_other > 1e-9 {
                Some(Inclusion::Fails {
                    witness: x,
                    margin: inside_self.min(outside_other),
                })
            } else {
                None
            }
        };
        let parallel = (self.plus - other.plus).norm() <= ntol
            && (self.minus - other.minus).norm() <= ntol;
        if parallel {
            let c = self.offset - other.offset;
            let a = minkowski_inner(&c, &other.plus);
            let b = minkowski_inner(&c, &other.minus);
            if a <= ntol && b >= -ntol {
                return Inclusion::Holds;
            }
            // A point of `self` just inside its violated boundary face lies
            // past the corresponding face of `other`.
            let depth = 0.5 * a.max(-b);
            if let Some(found) = witness_at(self.frame().apply(&Vector4::new(0.0, depth, 0.0, 0.0)))
            {
                return found;
            }
        }
        let antiparallel = (self.plus - other.minus).norm() <= ntol
            && (self.minus - other.plus).norm() <= ntol;
        if antiparallel {
            // Deep along `self`'s recession cone the roles of the two
            // inequalities are irreconcilable with `other`'s.
            let s = 1.0 + 4.0 * (self.offset.norm() + other.offset.norm() + 1.0);
            if let Some(found) = witness_at(self.frame().apply(&Vector4::new(0.0, s, 0.0, 0.0))) {
                return found;
            }
        }
        // General position: sampling refutation at growing scales.
        for scale in [1.0, 4.0, 16.0, 64.0] {
            for x in self.sample_interior(rng, samples, scale) {
                if let Some(found) = witness_at(x) {
                    return found;
                }
            }
        }
        Inclusion::Undecided
    }

    /// Short canonical description for reports.
    pub fn describe(&self) -> String {
        fn fmt(v: &Vector4<f64>) -> String {
            format!("[{:.4},{:.4},{:.4},{:.4}]", v[0], v[1], v[2], v[3])
        }
        format!(
            "wedge(plus={}, minus={}, offset={})",
            fmt(&self.plus),
            fmt(&self.minus),
            fmt(&self.offset)
        )
    }
}
