//! Real subspaces of a finite-dimensional complex Hilbert space and their
//! modular theory.
//!
//! A closed real subspace `H` of `C^n` is *cyclic* when `H + iH` is all of
//! `C^n`, *separating* when `H ∩ iH = {0}`, and *standard* when both hold
//! (which forces its real dimension to equal `n`). A standard subspace
//! carries the closed antilinear involution `S(h1 + i h2) = h1 - i h2` with
//! polar decomposition `S = J Δ^{1/2}`: `Δ` positive, `J` an antiunitary
//! involution, and the two obey the exchange identity `J Δ J = Δ^{-1}`.
//!
//! Two constructions are provided, inverse to each other:
//!
//! * [`RealSubspace::tomita_data`] recovers `(J, Δ)` from a standard
//!   subspace by dense linear algebra (healthy when `Δ`'s spectrum is within
//!   floating-point range);
//! * [`SpectralModularPair::standard_subspace`] rebuilds the subspace from
//!   an antiunitary involution `J` and a Hermitian generator `K` with
//!   `J K J^{-1} = -K`, as the fixed points of `J e^{-π K}`, assembled
//!   doublet-by-doublet from the `±κ` eigenplane pairing. This route never
//!   forms `Δ = e^{-2π K}` densely, so it stays accurate for log-spectral
//!   radii far beyond what a dense `Δ` could represent.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::linalg::{
    self, apply_c, apply_c_cols, complex_from_real_vec, hermitian_eigen, real_from_antilinear_op,
    real_from_complex_op, real_from_complex_vec, CMat, CVec, RMat, RVec,
};
use crate::tol;
use crate::{Error, Result};

/// Classification of a real subspace inside `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardness {
    pub complex_dim: usize,
    pub real_dim: usize,
    pub cyclic: bool,
    pub separating: bool,
    /// Relative singular value margin backing the cyclicity verdict
    /// (the `2n`-th largest singular value of `[B  iB]` over the largest).
    pub cyclic_margin: f64,
    /// Relative margin backing the separation verdict (the `2d`-th largest
    /// singular value of `[B  iB]` over the largest).
    pub separating_margin: f64,
}

impl Standardness {
    pub fn is_standard(&self) -> bool {
        self.cyclic && self.separating && self.real_dim == self.complex_dim
    }
}

/// A real subspace of `C^n`, stored as an orthonormal real basis of its
/// realification in `R^{2n}` (`v` is stored as `[Re v; Im v]`).
#[derive(Debug, Clone)]
pub struct RealSubspace {
    basis: RMat,
}

impl RealSubspace {
    /// Orthonormal basis of the real span of the given columns; dependent
    /// columns are collapsed (rank decided at [`tol::RANK_RELATIVE`]).
    pub fn from_spanning(columns: &RMat) -> Result<Self> {
        if columns.nrows() % 2 != 0 {
            return Err(Error::shape(
                "realified vectors need an even number of rows".to_string(),
            ));
        }
        if columns.ncols() == 0 {
            return Ok(Self {
                basis: RMat::zeros(columns.nrows(), 0),
            });
        }
        let svd = columns.clone().svd(true, false);
        let u = svd.u.as_ref().expect("svd with u requested");
        let top = svd.singular_values.max();
        let rank = svd
            .singular_values
            .iter()
            .filter(|&&s| s > tol::RANK_RELATIVE * top.max(1e-300))
            .count();
        Ok(Self {
            basis: u.columns(0, rank).clone_owned(),
        })
    }

    /// Wrap an already-orthonormal basis (re-orthonormalized defensively;
    /// errors only if the columns are actually dependent).
    pub fn from_orthonormal(basis: RMat) -> Result<Self> {
        if basis.nrows() % 2 != 0 {
            return Err(Error::shape(
                "realified vectors need an even number of rows".to_string(),
            ));
        }
        let q = linalg::orthonormalize_columns(&basis, tol::RANK_RELATIVE)?;
        Ok(Self { basis: q })
    }

    /// The real form `R^n` inside `C^n`.
    pub fn real_form(n: usize) -> Self {
        let mut b = RMat::zeros(2 * n, n);
        for k in 0..n {
            b[(k, k)] = 1.0;
        }
        Self { basis: b }
    }

    pub fn basis(&self) -> &RMat {
        &self.basis
    }

    /// Ambient complex dimension `n`.
    pub fn complex_dim(&self) -> usize {
        self.basis.nrows() / 2
    }

    /// Real dimension of the subspace.
    pub fn real_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// The subspace `iH`.
    pub fn multiply_i(&self) -> Self {
        Self {
            basis: apply_c_cols(&self.basis),
        }
    }

    /// The symplectic complement `H' = (iH)^⊥` (real-orthogonal complement
    /// taken after multiplying by `i`; equivalently `i (H^⊥)`). For a
    /// standard subspace this is again standard, with modular data
    /// `(J, Δ^{-1})`.
    pub fn symplectic_complement(&self) -> Self {
        let ih = apply_c_cols(&self.basis);
        Self {
            basis: linalg::orthogonal_complement(&ih, tol::RANK_RELATIVE),
        }
    }

    /// Cyclicity / separation report, from the singular spectrum of
    /// `[B  iB]`: full row rank means `H + iH` spans, full column rank means
    /// `H ∩ iH = {0}`.
    pub fn classify(&self) -> Standardness {
        let two_n = self.basis.nrows();
        let d = self.basis.ncols();
        let mut a = RMat::zeros(two_n, 2 * d);
        a.columns_mut(0, d).copy_from(&self.basis);
        a.columns_mut(d, d).copy_from(&apply_c_cols(&self.basis));
        let sv = if d == 0 {
            DVector::from_vec(vec![0.0])
        } else {
            a.svd(false, false).singular_values
        };
        let mut s: Vec<f64> = sv.iter().copied().collect();
        s.sort_by(|x, y| y.partial_cmp(x).expect("finite singular values"));
        let top = s.first().copied().unwrap_or(0.0).max(1e-300);
        let rel = |k: usize| s.get(k - 1).copied().unwrap_or(0.0) / top;
        let cyclic_margin = if two_n == 0 { 1.0 } else { rel(two_n) };
        let separating_margin = if d == 0 { 1.0 } else { rel(2 * d) };
        Standardness {
            complex_dim: two_n / 2,
            real_dim: d,
            cyclic: cyclic_margin > tol::RANK_RELATIVE,
            separating: separating_margin > tol::RANK_RELATIVE,
            cyclic_margin,
            separating_margin,
        }
    }

    /// Largest principal-angle sine to another subspace (0 iff equal spans).
    pub fn distance_to(&self, other: &Self) -> f64 {
        linalg::subspace_distance(&self.basis, &other.basis)
    }

    /// How far `other` sticks out of `self` (0 iff `other ⊆ self`).
    pub fn containment_defect_of(&self, other: &Self) -> f64 {
        linalg::containment_defect(&other.basis, &self.basis)
    }

    /// Image under an invertible real-linear map of the ambient space
    /// (typically a realified unitary or antiunitary). The image basis is
    /// re-orthonormalized; rank collapse is an error.
    pub fn transported(&self, op: &RMat) -> Result<Self> {
        let image = op * &self.basis;
        let gram_defect = (image.transpose() * &image - RMat::identity(image.ncols(), image.ncols()))
            .norm();
        if gram_defect < tol::EXACT_STRUCTURE {
            return Ok(Self { basis: image });
        }
        Self::from_orthonormal(image)
    }

    /// Recover the modular data `(J, Δ)` of a standard subspace by dense
    /// linear algebra: `S = A diag(I, -I) A^{-1}` for `A = [B  iB]`, then
    /// `Δ = S^T S` (complexified, symmetrized, and eigendecomposed) and
    /// `J = S Δ^{-1/2}`.
    ///
    /// Dense route: accurate while `Δ`'s condition number is moderate. The
    /// returned [`ModularData::pairing_residual`] and
    /// [`ModularData::involution_residual`] quantify the reconstruction.
    pub fn tomita_data(&self) -> Result<ModularData> {
        let cls = self.classify();
        if !cls.is_standard() {
            return Err(Error::NotStandard {
                cyclic: cls.cyclic,
                separating: cls.separating,
                margin: cls.cyclic_margin.min(cls.separating_margin),
            });
        }
        let n = self.complex_dim();
        let d = self.real_dim();
        let two_n = 2 * n;
        let mut a = RMat::zeros(two_n, 2 * d);
        a.columns_mut(0, d).copy_from(&self.basis);
        a.columns_mut(d, d).copy_from(&apply_c_cols(&self.basis));
        let mut sign = RMat::identity(2 * d, 2 * d);
        for k in d..2 * d {
            sign[(k, k)] = -1.0;
        }
        let a_inv = a.clone().try_inverse().ok_or_else(|| {
            Error::invalid("standard subspace produced a singular frame matrix".to_string())
        })?;
        let s_real = &a * sign * a_inv;
        // Δ as a complex positive operator: the realified S^T S commutes
        // with i (product of two antilinear maps); complexify with defect
        // reporting, then symmetrize and eigendecompose.
        let delta_real = s_real.transpose() * &s_real;
        let (delta_c, lin_defect) = real_from_complex_op_checked(&delta_real)?;
        let (eigvals, eigvecs) = hermitian_eigen(&delta_c);
        if eigvals.iter().any(|&l| l <= 0.0) {
            return Err(Error::invalid(format!(
                "modular operator not positive (smallest eigenvalue {:.3e})",
                eigvals.first().copied().unwrap_or(f64::NAN)
            )));
        }
        let log_eigvals: Vec<f64> = eigvals.iter().map(|l| l.ln()).collect();
        // J = S Δ^{-1/2}.
        let inv_sqrt = spectral_function(&eigvecs, &log_eigvals, |logl| (-0.5 * logl).exp());
        let j_real = &s_real * real_from_complex_op(&inv_sqrt);
        Ok(ModularData {
            j_real,
            log_eigvals,
            eigvecs,
            complexification_defect: lin_defect,
        })
    }

    /// Short description for reports.
    pub fn describe(&self) -> String {
        format!(
            "real subspace (dim {} in C^{})",
            self.real_dim(),
            self.complex_dim()
        )
    }
}

fn real_from_complex_op_checked(r: &RMat) -> Result<(CMat, f64)> {
    let (m, defect) = linalg::complex_from_real_op(r);
    if defect > 1e-6 {
        return Err(Error::WrongLinearity {
            kind: "complex-linear",
            residual: defect,
        });
    }
    Ok((m, defect))
}

/// Apply `f` to the log-eigenvalues: `V diag(f(log λ)) V^H`.
fn spectral_function(vectors: &CMat, log_eigvals: &[f64], f: impl Fn(f64) -> f64) -> CMat {
    let n = vectors.nrows();
    let mut scaled = vectors.clone();
    for k in 0..n {
        let w = f(log_eigvals[k]);
        for i in 0..n {
            scaled[(i, k)] *= Complex64::new(w, 0.0);
        }
    }
    &scaled * vectors.adjoint()
}

/// Same but with a complex-valued function of the log-eigenvalue (for the
/// unitary flow `Δ^{it} = e^{it log Δ}`).
fn spectral_function_c(vectors: &CMat, log_eigvals: &[f64], f: impl Fn(f64) -> Complex64) -> CMat {
    let n = vectors.nrows();
    let mut scaled = vectors.clone();
    for k in 0..n {
        let w = f(log_eigvals[k]);
        for i in 0..n {
            scaled[(i, k)] *= w;
        }
    }
    &scaled * vectors.adjoint()
}

/// Modular data of a standard subspace, stored spectrally: the antiunitary
/// `J` as a real matrix and `Δ` through its orthonormal eigenvectors and
/// log-eigenvalues.
#[derive(Debug, Clone)]
pub struct ModularData {
    j_real: RMat,
    log_eigvals: Vec<f64>,
    eigvecs: CMat,
    complexification_defect: f64,
}

impl ModularData {
    pub fn complex_dim(&self) -> usize {
        self.eigvecs.nrows()
    }

    pub fn j_real(&self) -> &RMat {
        &self.j_real
    }

    /// Ascending log-eigenvalues of `Δ`.
    pub fn log_spectrum(&self) -> &[f64] {
        &self.log_eigvals
    }

    /// Defect picked up when complexifying the realified `Δ` (should be at
    /// rounding level; it certifies that `S^T S` commuted with `i`).
    pub fn complexification_defect(&self) -> f64 {
        self.complexification_defect
    }

    /// Dense `Δ` (use only when the log-spectral radius is moderate).
    pub fn delta_real(&self) -> RMat {
        real_from_complex_op(&spectral_function(&self.eigvecs, &self.log_eigvals, f64::exp))
    }

    /// Realified unitary `Δ^{it}`.
    pub fn flow_real(&self, t: f64) -> RMat {
        real_from_complex_op(&spectral_function_c(
            &self.eigvecs,
            &self.log_eigvals,
            |logl| Complex64::from_polar(1.0, t * logl),
        ))
    }

    /// Realified antilinear `S = J Δ^{1/2}`.
    pub fn s_real(&self) -> RMat {
        &self.j_real
            * real_from_complex_op(&spectral_function(&self.eigvecs, &self.log_eigvals, |l| {
                (0.5 * l).exp()
            }))
    }

    /// `‖J J - 1‖` (J must be an involution).
    pub fn involution_residual(&self) -> f64 {
        let n2 = self.j_real.nrows();
        (&self.j_real * &self.j_real - RMat::identity(n2, n2)).norm()
    }

    /// Residual of the exchange identity `J Δ J = Δ^{-1}`, measured
    /// spectrally and conditioning-safely: for each eigenvector `v` with
    /// log-eigenvalue `l`, the distance of `J v` from the eigenspace at
    /// `-l` (log-eigenvalues matched by clustering). The worst case over
    /// the spectrum is returned.
    pub fn pairing_residual(&self) -> f64 {
        let n = self.complex_dim();
        let scale = self
            .log_eigvals
            .iter()
            .fold(0.0f64, |m, l| m.max(l.abs()))
            .max(1.0);
        let cluster_tol = 1e-8 * scale;
        let mut worst = 0.0f64;
        for k in 0..n {
            let v = self.eigvecs.column(k).clone_owned();
            let jv = apply_antiunitary(&self.j_real, &v);
            // Project off every eigenvector whose log-eigenvalue matches -l.
            let target = -self.log_eigvals[k];
            let mut residual = jv.clone();
            for m in 0..n {
                if (self.log_eigvals[m] - target).abs() <= cluster_tol {
                    let w = self.eigvecs.column(m).clone_owned();
                    let coeff = w.dotc(&residual);
                    residual -= w * coeff;
                }
            }
            worst = worst.max(residual.norm());
        }
        worst
    }

    /// The spectral pair `(J, K)` with `K = -log Δ / 2π`, for rebuilding
    /// the subspace via [`SpectralModularPair::standard_subspace`].
    pub fn to_spectral_pair(&self) -> SpectralModularPair {
        let kappa: Vec<f64> = self
            .log_eigvals
            .iter()
            .map(|l| -l / (2.0 * std::f64::consts::PI))
            .collect();
        SpectralModularPair {
            j_real: self.j_real.clone(),
            kappa,
            vectors: self.eigvecs.clone(),
        }
    }
}

/// Apply a realified antiunitary (or unitary) to a complex vector.
pub fn apply_antiunitary(op_real: &RMat, v: &CVec) -> CVec {
    complex_from_real_vec(&(op_real * real_from_complex_vec(v)))
}

/// An antiunitary involution `J` together with a Hermitian generator `K`
/// (given spectrally) satisfying `J K J^{-1} = -K`; equivalently the
/// modular pair `(J, Δ = e^{-2π K})` of a standard subspace.
#[derive(Debug, Clone)]
pub struct SpectralModularPair {
    /// Realified antiunitary involution.
    pub j_real: RMat,
    /// Eigenvalues of `K` (any order, paired with `vectors` columns).
    pub kappa: Vec<f64>,
    /// Complex orthonormal eigenvectors of `K`, one column per eigenvalue.
    pub vectors: CMat,
}

impl SpectralModularPair {
    /// Build from a conjugation matrix: `J v = M conj(v)`.
    pub fn from_conjugation(m: &CMat, kappa: Vec<f64>, vectors: CMat) -> Self {
        Self {
            j_real: real_from_antilinear_op(m),
            kappa,
            vectors,
        }
    }

    pub fn complex_dim(&self) -> usize {
        self.vectors.nrows()
    }

    /// `‖J J - 1‖`.
    pub fn involution_residual(&self) -> f64 {
        let n2 = self.j_real.nrows();
        (&self.j_real * &self.j_real - RMat::identity(n2, n2)).norm()
    }

    /// `‖J i + i J‖ / ‖J‖`: antilinearity of the real representative.
    pub fn antilinearity_residual(&self) -> f64 {
        linalg::antilinearity_defect(&self.j_real)
    }

    /// Worst-case distance of `J v` from the `-κ` eigenspace over all
    /// eigenvectors `v` at `κ`: the spectral residual of `J K J^{-1} = -K`,
    /// i.e. of the exchange identity, immune to the size of `e^{±2πκ}`.
    pub fn anti_symmetry_residual(&self) -> f64 {
        let n = self.complex_dim();
        let scale = self.kappa.iter().fold(0.0f64, |m, k| m.max(k.abs())).max(1.0);
        let cluster_tol = 1e-8 * scale;
        let mut worst = 0.0f64;
        for k in 0..n {
            let v = self.vectors.column(k).clone_owned();
            let jv = apply_antiunitary(&self.j_real, &v);
            let target = -self.kappa[k];
            let mut residual = jv.clone();
            for m in 0..n {
                if (self.kappa[m] - target).abs() <= cluster_tol {
                    let w = self.vectors.column(m).clone_owned();
                    let coeff = w.dotc(&residual);
                    residual -= w * coeff;
                }
            }
            worst = worst.max(residual.norm());
        }
        worst
    }

    /// The unitary `Δ^{it} = e^{-2π i t K}` (complex side).
    pub fn delta_flow(&self, t: f64) -> CMat {
        let n = self.complex_dim();
        let mut scaled = self.vectors.clone();
        for k in 0..n {
            let phase = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * t * self.kappa[k]);
            for i in 0..n {
                scaled[(i, k)] *= phase;
            }
        }
        &scaled * self.vectors.adjoint()
    }

    /// The standard subspace with modular data `(J, e^{-2π K})`: the fixed
    /// points of `S = J e^{-π K}`, assembled per `±κ` eigenplane doublet.
    ///
    /// For each eigenvector `b` at `κ > 0` the two real vectors
    ///
    /// ```text
    /// ξ = (b + √λ J b) / √(1 + λ)        λ = e^{-2π κ}
    /// η = i (b - √λ J b) / √(1 + λ)
    /// ```
    ///
    /// are `S`-fixed and orthonormal; the `κ = 0` sector contributes the
    /// real form of `J` restricted to it. Only `√λ ∈ (0, 1]` ever appears,
    /// so the construction is well-conditioned uniformly in `κ`.
    pub fn standard_subspace(&self) -> Result<RealSubspace> {
        let n = self.complex_dim();
        let scale = self.kappa.iter().fold(0.0f64, |m, k| m.max(k.abs())).max(1.0);
        let cluster_tol = 1e-9 * scale;
        let mut columns: Vec<RVec> = Vec::with_capacity(n);
        let mut zero_modes: Vec<usize> = Vec::new();
        for k in 0..n {
            if self.kappa[k].abs() <= cluster_tol {
                zero_modes.push(k);
                continue;
            }
            if self.kappa[k] < 0.0 {
                continue; // covered by the paired positive-κ doublet
            }
            let b = self.vectors.column(k).clone_owned();
            let jb = apply_antiunitary(&self.j_real, &b);
            let sqrt_lambda = (-std::f64::consts::PI * self.kappa[k]).exp();
            let norm = (1.0 + sqrt_lambda * sqrt_lambda).sqrt();
            let b_r = real_from_complex_vec(&b);
            let jb_r = real_from_complex_vec(&jb);
            let xi = (&b_r + sqrt_lambda * &jb_r) / norm;
            let eta = apply_c(&((&b_r - sqrt_lambda * &jb_r) / norm));
            columns.push(xi);
            columns.push(eta);
        }
        if !zero_modes.is_empty() {
            // Real form of J on the κ = 0 sector: the +1 eigenspace of the
            // (real-symmetric, orthogonal) restriction of J.
            let m = zero_modes.len();
            let mut p = RMat::zeros(2 * n, 2 * m);
            for (c, &k) in zero_modes.iter().enumerate() {
                let v = self.vectors.column(k).clone_owned();
                let vr = real_from_complex_vec(&v);
                let ivr = apply_c(&vr);
                p.set_column(c, &vr);
                p.set_column(m + c, &ivr);
            }
            let restricted = p.transpose() * &self.j_real * &p;
            let sym_defect = (&restricted - restricted.transpose()).norm();
            if sym_defect > 1e-8 {
                return Err(Error::VerificationFailed {
                    detail: "J does not leave the κ=0 sector invariant".to_string(),
                    residual: sym_defect,
                });
            }
            let (vals, vecs) = linalg::real_symmetric_eigen(&restricted);
            let mut plus_count = 0;
            for (idx, &val) in vals.iter().enumerate() {
                if (val - 1.0).abs() < 1e-6 {
                    plus_count += 1;
                    columns.push(&p * vecs.column(idx).clone_owned());
                }
            }
            if plus_count != m {
                return Err(Error::VerificationFailed {
                    detail: format!(
                        "real form of J on the κ=0 sector has dimension {plus_count}, expected {m}"
                    ),
                    residual: 0.0,
                });
            }
        }
        if columns.len() != n {
            return Err(Error::VerificationFailed {
                detail: format!(
                    "fixed-point construction produced real dimension {}, expected {n} \
                     (κ spectrum not symmetric under negation?)",
                    columns.len()
                ),
                residual: 0.0,
            });
        }
        let raw = RMat::from_columns(&columns);
        RealSubspace::from_orthonormal(raw)
    }
}
