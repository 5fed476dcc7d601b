//! Finite-dimensional commutant and bicommutant machinery.
//!
//! Everything here works with concrete matrices on `C^N` (or with compact
//! structured descriptions of them) and answers three questions about a
//! generating set `S`:
//!
//! 1. What is a basis of the commutant `S' = { X : [X, g] = 0 for g in S }`?
//! 2. Does a given operator belong to the bicommutant `S''`?
//! 3. How far away is it (Hilbert–Schmidt) when it does not?
//!
//! Two independent engines answer them:
//!
//! * a **dense** engine using only linear algebra — either a Gram matrix on
//!   the full `N^2`-dimensional operator space, or an eigen-profile
//!   reduction that first diagonalizes one unitary generator and
//!   parametrizes candidates by its eigenvalue-cluster blocks (the cluster
//!   choice only shapes the candidate space; every generator's constraint
//!   is re-imposed in the final Gram, so over-clustering is harmless);
//! * a **structured** engine for generator sets made of monomial matrices
//!   (permutation × phase), where the commutant is read off from orbit
//!   combinatorics after a separation precondition on the diagonal
//!   generators is verified.
//!
//! In finite dimension the bicommutant of a star-closed set containing the
//! identity equals the span of words in the generators, which provides a
//! third, independent oracle ([`word_span`]) and an exact Hilbert–Schmidt
//! distance via orthogonal projection.

use num_complex::Complex64;

use crate::linalg::{commutator, hermitian_eigen, hs_inner, hs_norm, normal_eigen, op_norm, CMat};
use crate::report::SolverPath;
use crate::tol;
use crate::{Error, Result};

/// Options for the dense commutant dispatcher.
#[derive(Debug, Clone)]
pub struct CommutantOptions {
    /// Largest `N` for which the full `N^2 × N^2` Gram route is allowed.
    pub dense_cap: usize,
    /// Largest block-parameter count allowed on the eigen-profile route.
    pub profile_cap: usize,
}

impl Default for CommutantOptions {
    fn default() -> Self {
        Self {
            dense_cap: 32,
            profile_cap: 2048,
        }
    }
}

/// Orthonormal (Hilbert–Schmidt) basis of a commutant, with diagnostics.
#[derive(Debug, Clone)]
pub struct CommutantBasis {
    pub basis: Vec<CMat>,
    pub path: SolverPath,
    /// Largest Gram eigenvalue kept as "null" (commutation violation of the
    /// accepted basis, squared scale).
    pub kept_max: f64,
    /// Smallest Gram eigenvalue discarded as "non-null".
    pub dropped_min: f64,
}

impl CommutantBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Verdict and quantification of membership in an operator algebra.
#[derive(Debug, Clone)]
pub struct Membership {
    pub member: bool,
    /// `max_Y ‖[X, Y]‖_HS / (2 ‖X‖_HS ‖Y‖_op)` over the probe basis `Y`.
    pub relative_commutator: f64,
    /// Relative Hilbert–Schmidt distance of `X` to the algebra, when an
    /// explicit basis of the algebra was available to project on.
    pub distance: Option<f64>,
    /// Certified lower bound on that relative distance (valid even when the
    /// exact distance was not computed).
    pub distance_lower_bound: f64,
}

fn check_square_same_size(gens: &[CMat]) -> Result<usize> {
    let n = gens
        .first()
        .ok_or_else(|| Error::invalid("empty generator set".to_string()))?
        .nrows();
    for g in gens {
        if g.nrows() != n || g.ncols() != n {
            return Err(Error::shape(format!(
                "generator of shape {}x{} in a set on C^{n}",
                g.nrows(),
                g.ncols()
            )));
        }
    }
    Ok(n)
}

fn is_unitary(g: &CMat) -> bool {
    let n = g.nrows();
    (g.adjoint() * g - CMat::identity(n, n)).norm() < 1e-10 * (n as f64).sqrt().max(1.0)
}

/// Append adjoints of non-unitary generators (for a unitary `g`,
/// `[X, g] = 0` already implies `[X, g^H] = 0`).
fn star_close(gens: &[CMat]) -> Vec<CMat> {
    let mut out: Vec<CMat> = gens.to_vec();
    for g in gens {
        if !is_unitary(g) {
            out.push(g.adjoint());
        }
    }
    out
}

/// Dense commutant via the operator-space Gram matrix.
///
/// With `vec` the column-major vectorization, the commutation map
/// `X -> X g - g X` has matrix `L_g`, and `M = Σ_g L_g^H L_g` is Hermitian
/// positive semidefinite with null space exactly the commutant. `M` is
/// assembled entrywise from the closed form
///
/// ```text
/// M[(i,j),(k,l)] = Σ_g [ δ_ik (g g^H)_lj + δ_jl (g^H g)_ik
///                        - g_ik conj(g_jl) - conj(g_ki) g_lj ]
/// ```
///
/// (cost `O(|S| N^4)`), followed by one `N^2 × N^2` Hermitian eigensolve.
pub fn commutant_gram(gens: &[CMat]) -> Result<CommutantBasis> {
    let n = check_square_same_size(gens)?;
    let closed = star_close(gens);
    let nn = n * n;
    let mut m = CMat::zeros(nn, nn);
    for g in &closed {
        let ggh = g * g.adjoint();
        let ghg = g.adjoint() * g;
        // vec index (i, j) -> j * n + i.
        for j in 0..n {
            for i in 0..n {
                let row = j * n + i;
                for l in 0..n {
                    for k in 0..n {
                        let col = l * n + k;
                        let mut v = Complex64::new(0.0, 0.0);
                        if i == k {
                            v += ggh[(l, j)];
                        }
                        if j == l {
                            v += ghg[(i, k)];
                        }
                        v -= g[(i, k)] * g[(j, l)].conj();
                        v -= g[(k, i)].conj() * g[(l, j)];
                        m[(row, col)] += v;
                    }
                }
            }
        }
    }
    let energy: f64 = closed.iter().map(|g| op_norm(g).powi(2)).sum();
    let (vals, vecs) = hermitian_eigen(&m);
    let threshold = tol::NULLSPACE_RELATIVE * vals.last().copied().unwrap_or(0.0).max(energy);
    let mut basis = Vec::new();
    let mut kept_max = 0.0f64;
    let mut dropped_min = f64::INFINITY;
    for (idx, &val) in vals.iter().enumerate() {
        if val.abs() <= threshold {
            kept_max = kept_max.max(val.abs());
            let col = vecs.column(idx);
            basis.push(CMat::from_fn(n, n, |i, j| col[j * n + i]));
        } else {
            dropped_min = dropped_min.min(val);
        }
    }
    Ok(CommutantBasis {
        basis,
        path: SolverPath::Dense,
        kept_max,
        dropped_min,
    })
}

/// Dense commutant via eigen-profile reduction.
///
/// Diagonalizes the unitary generator whose eigenvalue-cluster profile
/// yields the fewest block unknowns, parametrizes candidates by those
/// blocks, and imposes *every* generator (the defining one included) through
/// a Gram matrix on the block coefficients. Requires at least one unitary
/// generator.
pub fn commutant_profile(gens: &[CMat], profile_cap: usize) -> Result<CommutantBasis> {
    let n = check_square_same_size(gens)?;
    let closed = star_close(gens);
    // Choose the unitary generator with the cheapest block profile.
    let mut best: Option<(usize, Vec<usize>, Vec<Complex64>, CMat)> = None;
    for g in &closed {
        if !is_unitary(g) {
            continue;
        }
        let (vals, vecs) = normal_eigen(g);
        let clusters = cluster_complex(&vals, 1e-8);
        let cost: usize = {
            let mut counts = std::collections::HashMap::new();
            for &c in &clusters {
                *counts.entry(c).or_insert(0usize) += 1;
            }
            counts.values().map(|&c| c * c).sum()
        };
        if best.as_ref().map_or(true, |(b, _, _, _)| cost < *b) {
            best = Some((cost, clusters, vals, vecs));
        }
    }
    let (p_count, clusters, _vals, v) = best.ok_or_else(|| {
        Error::invalid("eigen-profile route needs at least one unitary generator".to_string())
    })?;
    if p_count > profile_cap {
        return Err(Error::DimensionCap {
            dim: p_count,
            cap: profile_cap,
        });
    }
    // Unknown positions: (r, c) with cluster(r) == cluster(c).
    let positions: Vec<(usize, usize)> = (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&(r, c)| clusters[r] == clusters[c])
        .collect();
    let p = positions.len();
    let mut gram = CMat::zeros(p, p);
    for g in &closed {
        let gt = v.adjoint() * g * &v;
        let g1 = &gt * gt.adjoint();
        let g2 = gt.adjoint() * &gt;
        for (q_idx, &(rq, cq)) in positions.iter().enumerate() {
            for (p_idx, &(rp, cp)) in positions.iter().enumerate() {
                let mut val = Complex64::new(0.0, 0.0);
                if rp == rq {
                    val += g1[(cq, cp)];
                }
                if cp == cq {
                    val += g2[(rp, rq)];
                }
                val -= gt[(rp, rq)] * gt[(cp, cq)].conj();
                val -= gt[(rq, rp)].conj() * gt[(cq, cp)];
                gram[(p_idx, q_idx)] += val;
            }
        }
    }
    let energy: f64 = closed.iter().map(|g| op_norm(g).powi(2)).sum();
    let (vals, vecs) = hermitian_eigen(&gram);
    let threshold = tol::NULLSPACE_RELATIVE * vals.last().copied().unwrap_or(0.0).max(energy);
    let mut basis = Vec::new();
    let mut kept_max = 0.0f64;
    let mut dropped_min = f64::INFINITY;
    for (idx, &val) in vals.iter().enumerate() {
        if val.abs() <= threshold {
            kept_max = kept_max.max(val.abs());
            let col = vecs.column(idx);
            let mut xt = CMat::zeros(n, n);
            for (p_idx, &(r, c)) in positions.iter().enumerate() {
                xt[(r, c)] = col[p_idx];
            }
            basis.push(&v * xt * v.adjoint());
        } else {
            dropped_min = dropped_min.min(val);
        }
    }
    Ok(CommutantBasis {
        basis,
        path: SolverPath::Dense,
        kept_max,
        dropped_min,
    })
}

/// Cluster complex values by union-find on pairs within `tol * scale`.
fn cluster_complex(vals: &[Complex64], rel_tol: f64) -> Vec<usize> {
    let n = vals.len();
    let scale = vals.iter().fold(0.0f64, |m, z| m.max(z.norm())).max(1.0);
    let tol = rel_tol * scale;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (vals[i] - vals[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect()
}

/// Dense commutant dispatcher: full Gram route up to `dense_cap`, then the
/// eigen-profile route, then a size error.
pub fn commutant_basis(gens: &[CMat], options: &CommutantOptions) -> Result<CommutantBasis> {
    let n = check_square_same_size(gens)?;
    if n <= options.dense_cap {
        return commutant_gram(gens);
    }
    commutant_profile(gens, options.profile_cap).map_err(|e| match e {
        Error::InvalidParameter { .. } => Error::DimensionCap {
            dim: n,
            cap: options.dense_cap,
        },
        other => other,
    })
}

/// Hilbert–Schmidt Gram–Schmidt with a relative drop tolerance; returns an
/// orthonormal basis of the span.
pub fn hs_orthonormalize(mats: &[CMat], drop_rel: f64) -> Vec<CMat> {
    let mut basis: Vec<CMat> = Vec::new();
    for m in mats {
        let scale = hs_norm(m);
        if scale == 0.0 {
            continue;
        }
        let mut r = m.clone();
        for _pass in 0..2 {
            for b in &basis {
                let coeff = hs_inner(b, &r);
                r -= b * coeff;
            }
        }
        if hs_norm(&r) > drop_rel * scale {
            let nrm = hs_norm(&r);
            basis.push(r / Complex64::new(nrm, 0.0));
        }
    }
    basis
}

/// Orthonormal basis of the *-algebra generated by `gens` and the identity:
/// the span of all words in the generators and their adjoints. In finite
/// dimension this equals the bicommutant.
pub fn word_span(gens: &[CMat]) -> Result<Vec<CMat>> {
    let n = check_square_same_size(gens)?;
    let mut closed: Vec<CMat> = gens.to_vec();
    for g in gens {
        closed.push(g.adjoint());
    }
    let mut basis = hs_orthonormalize(&[CMat::identity(n, n)], 1e-10);
    let mut frontier: Vec<CMat> = basis.clone();
    let full = n * n;
    while !frontier.is_empty() && basis.len() < full {
        let mut next = Vec::new();
        for f in &frontier {
            for g in &closed {
                if basis.len() + next.len() >= full {
                    break;
                }
                let cand = g * f;
                let scale = hs_norm(&cand);
                if scale == 0.0 {
                    continue;
                }
                let mut r = cand;
                for _pass in 0..2 {
                    for b in basis.iter().chain(next.iter()) {
                        let coeff = hs_inner(b, &r);
                        r -= b * coeff;
                    }
                }
                if hs_norm(&r) > 1e-10 * scale {
                    let nrm = hs_norm(&r);
                    next.push(r / Complex64::new(nrm, 0.0));
                }
            }
        }
        basis.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(basis)
}

/// Relative Hilbert–Schmidt distance of `x` to the span of an orthonormal
/// family.
pub fn hs_distance_to_span(x: &CMat, basis: &[CMat]) -> f64 {
    let scale = hs_norm(x);
    if scale == 0.0 {
        return 0.0;
    }
    let mut r = x.clone();
    for b in basis {
        let coeff = hs_inner(b, &r);
        r -= b * coeff;
    }
    hs_norm(&r) / scale
}

/// Membership of `x` in the bicommutant of `gens`, decided through the
/// commutant: `x ∈ S''` iff `x` commutes with every element of `S'`.
///
/// The distance is computed exactly (word-span projection) when
/// `N <= options.dense_cap`; otherwise only the certified lower bound
/// `max_Y ‖[X, Y]‖_HS / (2 ‖X‖_HS ‖Y‖_op)` is reported (valid because every
/// `Z ∈ S''` has `[Z, Y] = 0`, so `‖[X, Y]‖ ≤ 2 ‖X - Z‖_HS ‖Y‖_op`).
pub fn bicommutant_membership(
    x: &CMat,
    gens: &[CMat],
    options: &CommutantOptions,
) -> Result<(Membership, CommutantBasis)> {
    let n = check_square_same_size(gens)?;
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::shape(format!(
            "membership candidate is {}x{}, generators act on C^{n}",
            x.nrows(),
            x.ncols()
        )));
    }
    let commutant = commutant_basis(gens, options)?;
    let x_scale = hs_norm(x).max(1e-300);
    let mut worst = 0.0f64;
    for y in &commutant.basis {
        let c = commutator(x, y);
        let rel = hs_norm(&c) / (2.0 * x_scale * op_norm(y).max(1e-300));
        worst = worst.max(rel);
    }
    let member = worst <= tol::MEMBERSHIP;
    let distance = if n <= options.dense_cap {
        let words = word_span(gens)?;
        Some(hs_distance_to_span(x, &words))
    } else {
        None
    };
    Ok((
        Membership {
            member,
            relative_commutator: worst,
            distance,
            distance_lower_bound: worst,
        },
        commutant,
    ))
}

/// Dimension of the intertwiner space `{ X : X a_g = b_g X for all g }`
/// between two families indexed the same way (`X` maps the `a`-space into
/// the `b`-space). The same Gram construction as [`commutant_gram`], with
/// `a` acting on the right and `b` on the left. Supply star-closed or
/// unitary families.
pub fn intertwiner_dim(a_gens: &[CMat], b_gens: &[CMat]) -> Result<usize> {
    if a_gens.len() != b_gens.len() {
        return Err(Error::shape(
            "intertwiner families must pair up one generator at a time".to_string(),
        ));
    }
    let na = check_square_same_size(a_gens)?;
    let nb = check_square_same_size(b_gens)?;
    let nn = na * nb;
    let mut m = CMat::zeros(nn, nn);
    for (ga, gb) in a_gens.iter().zip(b_gens.iter()) {
        let g1 = ga * ga.adjoint();
        let g2 = gb.adjoint() * gb;
        // X is nb x na; vec index (i, j) -> j * nb + i.
        for j in 0..na {
            for i in 0..nb {
                let row = j * nb + i;
                for l in 0..na {
                    for k in 0..nb {
                        let col = l * nb + k;
                        let mut v = Complex64::new(0.0, 0.0);
                        if i == k {
                            v += g1[(l, j)];
                        }
                        if j == l {
                            v += g2[(i, k)];
                        }
                        v -= gb[(i, k)] * ga[(j, l)].conj();
                        v -= gb[(k, i)].conj() * ga[(l, j)];
                        m[(row, col)] += v;
                    }
                }
            }
        }
    }
    let energy: f64 = a_gens
        .iter()
        .chain(b_gens.iter())
        .map(|g| op_norm(g).powi(2))
        .sum();
    let (vals, _) = hermitian_eigen(&m);
    let threshold = tol::NULLSPACE_RELATIVE * vals.last().copied().unwrap_or(0.0).max(energy);
    Ok(vals.iter().filter(|v| v.abs() <= threshold).count())
}

// ---------------------------------------------------------------------------
// Structured engine: monomial generators and orbit combinatorics.
// ---------------------------------------------------------------------------

/// A monomial (generalized permutation) matrix on one sector's base space:
/// `M e_j = phase[j] * e_{perm[j]}`.
#[derive(Debug, Clone)]
pub struct Monomial {
    pub perm: Vec<usize>,
    pub phases: Vec<Complex64>,
}

impl Monomial {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            phases: vec![Complex64::new(1.0, 0.0); n],
        }
    }

    pub fn diagonal(phases: Vec<Complex64>) -> Self {
        Self {
            perm: (0..phases.len()).collect(),
            phases,
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p == i)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.perm.len();
        if self.phases.len() != n {
            return Err(Error::shape(
                "monomial phases and permutation differ in length".to_string(),
            ));
        }
        let mut seen = vec![false; n];
        for &p in &self.perm {
            if p >= n || seen[p] {
                return Err(Error::NotAPermutation {
                    detail: format!("index {p} repeated or out of range in a {n}-point monomial"),
                });
            }
            seen[p] = true;
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> CMat {
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for j in 0..n {
            m[(self.perm[j], j)] = self.phases[j];
        }
        m
    }

    /// The monomial of the matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::shape(format!(
                "cannot compose monomials on {} and {} points",
                self.dim(),
                other.dim()
            )));
        }
        let perm = other.perm.iter().map(|&j| self.perm[j]).collect();
        let phases = other
            .phases
            .iter()
            .zip(&other.perm)
            .map(|(&p, &j)| p * self.phases[j])
            .collect();
        Ok(Self { perm, phases })
    }

    /// The monomial of the inverse matrix (phases are assumed unimodular
    /// up to scale: the inverse of `phase · e_{perm}` is `phase^{-1}`).
    pub fn inverse(&self) -> Self {
        let n = self.dim();
        let mut perm = vec![0usize; n];
        let mut phases = vec![Complex64::new(1.0, 0.0); n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            phases[self.perm[j]] = self.phases[j].finv();
        }
        Self { perm, phases }
    }
}

/// One sector of a structured space: `base_dim` grid points, each carried
/// with `multiplicity` identical copies (generators act as `g ⊗ 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sector {
    pub base_dim: usize,
    pub multiplicity: usize,
}

/// A generator acting monomially in every sector.
#[derive(Debug, Clone)]
pub struct StructuredGenerator {
    pub name: String,
    pub per_sector: Vec<Monomial>,
}

/// A set of structured generators over a common sector decomposition.
///
/// Global index layout: sectors in order; within a sector the base index is
/// major and the multiplicity copy minor (`global = offset + base * mult +
/// copy`), so `g ⊗ 1` is the Kronecker product of the base action with the
/// copy identity.
#[derive(Debug, Clone)]
pub struct StructuredSet {
    pub sectors: Vec<Sector>,
    pub generators: Vec<StructuredGenerator>,
}

impl StructuredSet {
    pub fn total_dim(&self) -> usize {
        self.sectors
            .iter()
            .map(|s| s.base_dim * s.multiplicity)
            .sum()
    }

    fn sector_offsets(&self) -> Vec<usize> {
        let mut offs = Vec::with_capacity(self.sectors.len());
        let mut acc = 0;
        for s in &self.sectors {
            offs.push(acc);
            acc += s.base_dim * s.multiplicity;
        }
        offs
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.generators {
            if g.per_sector.len() != self.sectors.len() {
                return Err(Error::shape(format!(
                    "generator '{}' covers {} sectors, set has {}",
                    g.name,
                    g.per_sector.len(),
                    self.sectors.len()
                )));
            }
            for (m, s) in g.per_sector.iter().zip(self.sectors.iter()) {
                m.validate()?;
                if m.dim() != s.base_dim {
                    return Err(Error::shape(format!(
                        "generator '{}' acts on {} points in a {}-point sector",
                        g.name,
                        m.dim(),
                        s.base_dim
                    )));
                }
            }
        }
        Ok(())
    }

    /// Generators that are diagonal in every sector (these carry the
    /// separation structure).
    fn diagonal_generators(&self) -> Vec<&StructuredGenerator> {
        self.generators
            .iter()
            .filter(|g| g.per_sector.iter().all(Monomial::is_diagonal))
            .collect()
    }

    /// Verify the separation precondition the orbit reading of the
    /// commutant relies on:
    ///
    /// * within each sector, any two base indices are separated by some
    ///   all-diagonal generator (phase gap above `gap`), so the diagonal
    ///   generators generate a maximal abelian subalgebra of the base;
    /// * across sectors, the joint diagonal value tuples are disjoint, so
    ///   no cross-sector intertwiners survive.
    pub fn check_separation(&self, gap: f64) -> Result<()> {
        let diags = self.diagonal_generators();
        if diags.is_empty() && self.sectors.iter().any(|s| s.base_dim > 1) {
            return Err(Error::StructuredPrecondition {
                detail: "no all-diagonal generators to separate indices".to_string(),
            });
        }
        let separated = |s1: usize, i1: usize, s2: usize, i2: usize| -> bool {
            diags
                .iter()
                .any(|g| (g.per_sector[s1].phases[i1] - g.per_sector[s2].phases[i2]).norm() > gap)
        };
        for (s, sector) in self.sectors.iter().enumerate() {
            for i in 0..sector.base_dim {
                for j in (i + 1)..sector.base_dim {
                    if !separated(s, i, s, j) {
                        return Err(Error::StructuredPrecondition {
                            detail: format!(
                                "indices {i} and {j} of sector {s} share all diagonal values \
                                 (gap {gap:.1e})"
                            ),
                        });
                    }
                }
            }
        }
        for s1 in 0..self.sectors.len() {
            for s2 in (s1 + 1)..self.sectors.len() {
                for i in 0..self.sectors[s1].base_dim {
                    for j in 0..self.sectors[s2].base_dim {
                        if !separated(s1, i, s2, j) {
                            return Err(Error::StructuredPrecondition {
                                detail: format!(
                                    "index {i} of sector {s1} and index {j} of sector {s2} \
                                     share all diagonal values (gap {gap:.1e})"
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Orbits of the permutation parts, per sector (sorted).
    pub fn orbits(&self) -> Vec<Vec<Vec<usize>>> {
        self.sectors
            .iter()
            .enumerate()
            .map(|(s, sector)| {
                let n = sector.base_dim;
                let mut parent: Vec<usize> = (0..n).collect();
                fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
                    while parent[x] != x {
                        parent[x] = parent[parent[x]];
                        x = parent[x];
                    }
                    x
                }
                for g in &self.generators {
                    for (j, &p) in g.per_sector[s].perm.iter().enumerate() {
                        let (rj, rp) = (find(&mut parent, j), find(&mut parent, p));
                        if rj != rp {
                            parent[rj] = rp;
                        }
                    }
                }
                let mut groups: std::collections::BTreeMap<usize, Vec<usize>> =
                    std::collections::BTreeMap::new();
                for i in 0..n {
                    let r = find(&mut parent, i);
                    groups.entry(r).or_default().push(i);
                }
                groups.into_values().collect()
            })
            .collect()
    }

    /// Dimension of the commutant under the separation precondition:
    /// `Σ_sectors #orbits × multiplicity²`.
    pub fn commutant_dim(&self) -> usize {
        self.orbits()
            .iter()
            .zip(self.sectors.iter())
            .map(|(orbs, s)| orbs.len() * s.multiplicity * s.multiplicity)
            .sum()
    }

    /// Dimension of the bicommutant under the precondition:
    /// `Σ_sectors Σ_orbits |orbit|²`.
    pub fn bicommutant_dim(&self) -> usize {
        self.orbits()
            .iter()
            .map(|orbs| orbs.iter().map(|o| o.len() * o.len()).sum::<usize>())
            .sum()
    }

    /// Expand the generators to dense matrices on the full space (for
    /// cross-checks against the dense engine).
    pub fn dense_generators(&self) -> Vec<CMat> {
        let total = self.total_dim();
        let offs = self.sector_offsets();
        self.generators
            .iter()
            .map(|g| {
                let mut m = CMat::zeros(total, total);
                for (s, sector) in self.sectors.iter().enumerate() {
                    let mono = &g.per_sector[s];
                    for j in 0..sector.base_dim {
                        let pj = mono.perm[j];
                        for a in 0..sector.multiplicity {
                            let row = offs[s] + pj * sector.multiplicity + a;
                            let col = offs[s] + j * sector.multiplicity + a;
                            m[(row, col)] = mono.phases[j];
                        }
                    }
                }
                m
            })
            .collect()
    }

    /// Expand an orthonormal (HS) basis of the commutant predicted by the
    /// orbit reading: orbit-averaging diagonals tensor matrix units on the
    /// multiplicity space.
    pub fn commutant_basis_dense(&self) -> Vec<CMat> {
        let total = self.total_dim();
        let offs = self.sector_offsets();
        let mut out = Vec::new();
        for (s, (sector, orbs)) in self.sectors.iter().zip(self.orbits()).enumerate() {
            let m = sector.multiplicity;
            for orbit in orbs {
                let scale = 1.0 / (orbit.len() as f64).sqrt();
                for a in 0..m {
                    for b in 0..m {
                        let mut x = CMat::zeros(total, total);
                        for &i in &orbit {
                            let row = offs[s] + i * m + a;
                            let col = offs[s] + i * m + b;
                            x[(row, col)] = Complex64::new(scale, 0.0);
                        }
                        out.push(x);
                    }
                }
            }
        }
        out
    }

    /// Membership of a dense operator in the bicommutant, by orthogonal
    /// projection onto its orbit-block form `⊕_sector ⊕_orbit B_o ⊗ 1`:
    /// entries allowed only within one sector and one orbit, equal across
    /// multiplicity copies. Returns the relative HS residual as the
    /// distance (the projection is orthogonal, so this is exact).
    pub fn bicommutant_membership(&self, x: &CMat, gap: f64) -> Result<Membership> {
        self.validate()?;
        self.check_separation(gap)?;
        let total = self.total_dim();
        if x.nrows() != total || x.ncols() != total {
            return Err(Error::shape(format!(
                "operator is {}x{}, structured space has dimension {total}",
                x.nrows(),
                x.ncols()
            )));
        }
        let offs = self.sector_offsets();
        let orbits = self.orbits();
        let mut orbit_of: Vec<Vec<usize>> = Vec::new();
        for (s, orbs) in orbits.iter().enumerate() {
            let mut map = vec![0usize; self.sectors[s].base_dim];
            for (o_idx, orbit) in orbs.iter().enumerate() {
                for &i in orbit {
                    map[i] = o_idx;
                }
            }
            orbit_of.push(map);
        }
        let norm_sq: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        let mut proj_sq = 0.0f64;
        for (s, sector) in self.sectors.iter().enumerate() {
            let m = sector.multiplicity;
            for i in 0..sector.base_dim {
                for j in 0..sector.base_dim {
                    if orbit_of[s][i] != orbit_of[s][j] {
                        continue;
                    }
                    // Average over copies: the projection of the (i, j)
                    // block onto multiples of the identity on copies.
                    let mut avg = Complex64::new(0.0, 0.0);
                    for a in 0..m {
                        avg += x[(offs[s] + i * m + a, offs[s] + j * m + a)];
                    }
                    avg /= m as f64;
                    proj_sq += m as f64 * avg.norm_sqr();
                }
            }
        }
        let scale = norm_sq.max(1e-300);
        let distance = ((norm_sq - proj_sq).max(0.0) / scale).sqrt();
        Ok(Membership {
            member: distance <= tol::MEMBERSHIP,
            relative_commutator: distance, // residual doubles as the witness scale
            distance: Some(distance),
            distance_lower_bound: distance,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift(n: usize) -> CMat {
        let mut m = CMat::zeros(n, n);
        for j in 0..n {
            m[((j + 1) % n, j)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    fn diag(vals: &[f64]) -> CMat {
        let n = vals.len();
        CMat::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(vals[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn commutant_of_identity_is_everything() {
        let gens = vec![CMat::identity(3, 3)];
        let c = commutant_gram(&gens).unwrap();
        assert_eq!(c.dim(), 9);
    }

    #[test]
    fn commutant_of_the_shift_is_the_circulant_algebra() {
        let gens = vec![shift(5)];
        let c = commutant_gram(&gens).unwrap();
        assert_eq!(c.dim(), 5);
        for y in &c.basis {
            assert!(hs_norm(&commutator(y, &gens[0])) < 1e-9);
        }
    }

    #[test]
    fn commutant_of_a_degenerate_diagonal() {
        // diag(1,1,2): commutant M_2 ⊕ M_1 (dim 5), bicommutant dim 2.
        let gens = vec![diag(&[1.0, 1.0, 2.0])];
        let c = commutant_gram(&gens).unwrap();
        assert_eq!(c.dim(), 5);
        let words = word_span(&gens).unwrap();
        assert_eq!(words.len(), 2);
        // Membership verdicts.
        let opts = CommutantOptions::default();
        let inside = diag(&[3.0, 3.0, -1.0]);
        let (mem, _) = bicommutant_membership(&inside, &gens, &opts).unwrap();
        assert!(mem.member);
        assert!(mem.relative_commutator < 1e-10);
        assert!(mem.distance.unwrap() < 1e-10);
        // E_12 commutes with the generator but not with its commutant.
        let mut e12 = CMat::zeros(3, 3);
        e12[(0, 1)] = Complex64::new(1.0, 0.0);
        let (mem, _) = bicommutant_membership(&e12, &gens, &opts).unwrap();
        assert!(!mem.member);
        assert!((mem.distance.unwrap() - 1.0).abs() < 1e-9, "E12 is HS-orthogonal to span{{P1, P2}}");
        assert!(mem.distance_lower_bound <= mem.distance.unwrap() + 1e-12);
    }

    #[test]
    fn profile_route_agrees_with_gram_route() {
        // Unitary generators: a shift and a phase diagonal on C^6.
        let u1 = shift(6);
        let u2 = CMat::from_fn(6, 6, |i, j| {
            if i == j {
                Complex64::from_polar(1.0, 0.7 * (i as f64))
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let gens = vec![u1, u2];
        let a = commutant_gram(&gens).unwrap();
        let b = commutant_profile(&gens, 4096).unwrap();
        assert_eq!(a.dim(), b.dim());
        // Every basis element of one lies in the span of the other.
        for x in &a.basis {
            assert!(hs_distance_to_span(x, &b.basis) < 1e-8);
        }
        for x in &b.basis {
            assert!(hs_distance_to_span(x, &a.basis) < 1e-8);
        }
    }

    #[test]
    fn profile_route_handles_degenerate_clusters() {
        // diag phases with a *near* degeneracy: clusters over-merge, yet the
        // final Gram re-imposes the exact constraints.
        let eps = 3e-9;
        let u = CMat::from_fn(4, 4, |i, j| {
            if i == j {
                let ang = match i {
                    0 => 0.0,
                    1 => eps,
                    2 => 1.0,
                    _ => 2.0,
                };
                Complex64::from_polar(1.0, ang)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let gens = vec![u];
        let a = commutant_gram(&gens).unwrap();
        let b = commutant_profile(&gens, 4096).unwrap();
        assert_eq!(a.dim(), b.dim());
    }

    #[test]
    fn word_span_of_shift_is_abelian_of_full_cycle_dimension() {
        let words = word_span(&[shift(4)]).unwrap();
        assert_eq!(words.len(), 4);
    }

    #[test]
    fn intertwiners_count_matching_structure() {
        // Same representation: intertwiners = commutant (shift: dim n).
        let d = intertwiner_dim(&[shift(3)], &[shift(3)]).unwrap();
        assert_eq!(d, 3);
        // Disjoint diagonal spectra: none.
        let d = intertwiner_dim(&[diag(&[1.0, 2.0])], &[diag(&[3.0, 4.0])]).unwrap();
        assert_eq!(d, 0);
        // A copy of the representation inside a double: X = (c1, c2) blocks.
        let single = diag(&[1.0, 2.0]);
        let double = diag(&[1.0, 2.0, 1.0, 2.0]);
        let d = intertwiner_dim(&[single], &[double]).unwrap();
        // Every matching diagonal pair contributes: (1->1, 1->1'), (2->2, 2->2').
        assert_eq!(d, 4);
    }

    #[test]
    fn structured_orbit_reading_matches_dense_engine() {
        // One sector of 4 points: a separating diagonal and the 4-cycle.
        let set = StructuredSet {
            sectors: vec![Sector {
                base_dim: 4,
                multiplicity: 1,
            }],
            generators: vec![
                StructuredGenerator {
                    name: "diag".to_string(),
                    per_sector: vec![Monomial::diagonal(
                        (0..4)
                            .map(|i| Complex64::from_polar(1.0, 0.5 + i as f64))
                            .collect(),
                    )],
                },
                StructuredGenerator {
                    name: "cycle".to_string(),
                    per_sector: vec![Monomial {
                        perm: vec![1, 2, 3, 0],
                        phases: vec![Complex64::new(1.0, 0.0); 4],
                    }],
                },
            ],
        };
        set.validate().unwrap();
        set.check_separation(1e-6).unwrap();
        assert_eq!(set.commutant_dim(), 1);
        assert_eq!(set.bicommutant_dim(), 16);
        let dense = commutant_gram(&set.dense_generators()).unwrap();
        assert_eq!(dense.dim(), set.commutant_dim());
        // The predicted commutant basis actually commutes and spans the same
        // space.
        for y in set.commutant_basis_dense() {
            for g in set.dense_generators() {
                assert!(hs_norm(&commutator(&y, &g)) < 1e-10);
            }
            assert!(hs_distance_to_span(&y, &dense.basis) < 1e-8);
        }
        // Everything is in the bicommutant here (it is all of M_4).
        let x = CMat::from_fn(4, 4, |i, j| Complex64::new((i + 2 * j) as f64, 1.0));
        let mem = set.bicommutant_membership(&x, 1e-6).unwrap();
        assert!(mem.member);
    }

    #[test]
    fn multiplicity_copies_separate_commutant_from_bicommutant() {
        // One sector, 2 base points, multiplicity 2, one separating diagonal.
        let set = StructuredSet {
            sectors: vec![Sector {
                base_dim: 2,
                multiplicity: 2,
            }],
            generators: vec![StructuredGenerator {
                name: "diag".to_string(),
                per_sector: vec![Monomial::diagonal(vec![
                    Complex64::new(1.0, 0.0),
                    Complex64::new(2.0, 0.0),
                ])],
            }],
        };
        assert_eq!(set.commutant_dim(), 2 * 4);
        assert_eq!(set.bicommutant_dim(), 2);
        let dense_gens = set.dense_generators();
        let dense = commutant_gram(&dense_gens).unwrap();
        assert_eq!(dense.dim(), 8);
        let words = word_span(&dense_gens).unwrap();
        assert_eq!(words.len(), 2);
        // B ⊗ 1 passes, 1 ⊗ E_12 fails with relative distance 1.
        let member = diag(&[5.0, 5.0, -2.0, -2.0]);
        let mem = set.bicommutant_membership(&member, 1e-6).unwrap();
        assert!(mem.member);
        let mut cross = CMat::zeros(4, 4);
        cross[(0, 1)] = Complex64::new(1.0, 0.0);
        cross[(2, 3)] = Complex64::new(1.0, 0.0);
        let mem = set.bicommutant_membership(&cross, 1e-6).unwrap();
        assert!(!mem.member);
        assert!((mem.distance.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_diagonals_are_rejected() {
        let set = StructuredSet {
            sectors: vec![Sector {
                base_dim: 2,
                multiplicity: 1,
            }],
            generators: vec![StructuredGenerator {
                name: "degenerate".to_string(),
                per_sector: vec![Monomial::diagonal(vec![
                    Complex64::new(1.0, 0.0),
                    Complex64::new(1.0, 0.0),
                ])],
            }],
        };
        match set.check_separation(1e-6) {
            Err(Error::StructuredPrecondition { .. }) => {}
            other => panic!("expected precondition failure, got {other:?}"),
        }
    }

    #[test]
    fn cross_sector_tuple_overlap_is_rejected() {
        let set = StructuredSet {
            sectors: vec![
                Sector {
                    base_dim: 1,
                    multiplicity: 1,
                },
                Sector {
                    base_dim: 1,
                    multiplicity: 1,
                },
            ],
            generators: vec![StructuredGenerator {
                name: "diag".to_string(),
                per_sector: vec![
                    Monomial::diagonal(vec![Complex64::new(1.0, 0.0)]),
                    Monomial::diagonal(vec![Complex64::new(1.0, 0.0)]),
                ],
            }],
        };
        assert!(matches!(
            set.check_separation(1e-6),
            Err(Error::StructuredPrecondition { .. })
        ));
    }

    #[test]
    fn monomial_membership_detects_orbit_breaking() {
        // Two orbits {0,1} and {2,3} (two 2-cycles); a monomial exchanging
        // the orbits is not in the bicommutant.
        let set = StructuredSet {
            sectors: vec![Sector {
                base_dim: 4,
                multiplicity: 1,
            }],
            generators: vec![
                StructuredGenerator {
                    name: "diag".to_string(),
                    per_sector: vec![Monomial::diagonal(
                        (0..4)
                            .map(|i| Complex64::new(i as f64, 0.0))
                            .collect(),
                    )],
                },
                StructuredGenerator {
                    name: "swap01_23".to_string(),
                    per_sector: vec![Monomial {
                        perm: vec![1, 0, 3, 2],
                        phases: vec![Complex64::new(1.0, 0.0); 4],
                    }],
                },
            ],
        };
        assert_eq!(set.bicommutant_dim(), 8);
        // Stays within orbits: member.
        let inside = Monomial {
            perm: vec![1, 0, 2, 3],
            phases: vec![Complex64::new(1.0, 0.0); 4],
        }
        .to_matrix();
        assert!(set.bicommutant_membership(&inside, 1e-6).unwrap().member);
        // Exchanges the orbits: not a member; all 4 entries misplaced.
        let outside = Monomial {
            perm: vec![2, 3, 0, 1],
            phases: vec![Complex64::new(1.0, 0.0); 4],
        }
        .to_matrix();
        let mem = set.bicommutant_membership(&outside, 1e-6).unwrap();
        assert!(!mem.member);
        assert!((mem.distance.unwrap() - 1.0).abs() < 1e-12);
        // Dense cross-check of the verdicts.
        let opts = CommutantOptions::default();
        let dense_gens = set.dense_generators();
        let (dm, _) = bicommutant_membership(&inside, &dense_gens, &opts).unwrap();
        assert!(dm.member);
        let (dm, _) = bicommutant_membership(&outside, &dense_gens, &opts).unwrap();
        assert!(!dm.member);
    }
}
