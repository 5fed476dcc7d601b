//! Shared dense linear algebra: complex/real representations, spectral
//! decompositions, principal angles.
//!
//! Conventions used throughout the crate:
//!
//! * A complex vector `v ∈ C^n` is stored as the real vector
//!   `[Re v; Im v] ∈ R^{2n}`; multiplication by `i` is the block matrix
//!   `C = [[0, -I], [I, 0]]`.
//! * A complex-linear operator `X + iY` becomes `[[X, -Y], [Y, X]]`
//!   (commutes with `C`); an antilinear operator `v ↦ M·conj(v)` becomes
//!   `[[X, Y], [Y, -X]]` for `M = X + iY` (anticommutes with `C`).
//! * The real inner product of realified vectors is the real part of the
//!   complex one; `⟨u, Cv⟩` recovers minus its imaginary part.
//!
//! Hermitian eigendecompositions dispatch to nalgebra below a size
//! threshold and to faer above it (faer is considerably faster on the
//! constraint-Gram matrices the commutant engine produces).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

/// Size above which Hermitian eigenproblems are routed to faer.
const FAER_THRESHOLD: usize = 96;

/// Real 2n×2n matrix of multiplication by `i`.
pub fn c_matrix(n: usize) -> RMat {
    let mut c = RMat::zeros(2 * n, 2 * n);
    for k in 0..n {
        c[(k, n + k)] = -1.0;
        c[(n + k, k)] = 1.0;
    }
    c
}

/// Apply multiplication by `i` to a realified vector without forming `C`.
pub fn apply_c(x: &RVec) -> RVec {
    let n = x.len() / 2;
    let mut y = RVec::zeros(2 * n);
    for k in 0..n {
        y[k] = -x[n + k];
        y[n + k] = x[k];
    }
    y
}

/// Apply `i·` to every column.
pub fn apply_c_cols(m: &RMat) -> RMat {
    let n = m.nrows() / 2;
    let mut out = RMat::zeros(m.nrows(), m.ncols());
    for j in 0..m.ncols() {
        for k in 0..n {
            out[(k, j)] = -m[(n + k, j)];
            out[(n + k, j)] = m[(k, j)];
        }
    }
    out
}

/// Realify a complex vector as `[Re v; Im v]`.
pub fn real_from_complex_vec(v: &CVec) -> RVec {
    let n = v.len();
    let mut x = RVec::zeros(2 * n);
    for k in 0..n {
        x[k] = v[k].re;
        x[n + k] = v[k].im;
    }
    x
}

/// Recover the complex vector from its realification.
pub fn complex_from_real_vec(x: &RVec) -> CVec {
    let n = x.len() / 2;
    CVec::from_fn(n, |k, _| Complex64::new(x[k], x[n + k]))
}

/// Realify a complex-linear operator.
pub fn real_from_complex_op(m: &CMat) -> RMat {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let mut r = RMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            r[(i, j)] = z.re;
            r[(i, n + j)] = -z.im;
            r[(n + i, j)] = z.im;
            r[(n + i, n + j)] = z.re;
        }
    }
    r
}

/// Realify the antilinear operator `v ↦ M·conj(v)`.
pub fn real_from_antilinear_op(m: &CMat) -> RMat {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let mut r = RMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            r[(i, j)] = z.re;
            r[(i, n + j)] = z.im;
            r[(n + i, j)] = z.im;
            r[(n + i, n + j)] = -z.re;
        }
    }
    r
}

/// How far a real 2n×2n matrix is from commuting with `C`, relative to its norm.
pub fn linearity_defect(r: &RMat) -> f64 {
    let n = r.nrows() / 2;
    let c = c_matrix(n);
    let comm = &c * r - r * &c;
    let scale = r.norm().max(1e-300);
    comm.norm() / scale
}

/// How far it is from anticommuting with `C`, relative to its norm.
pub fn antilinearity_defect(r: &RMat) -> f64 {
    let n = r.nrows() / 2;
    let c = c_matrix(n);
    let anti = &c * r + r * &c;
    let scale = r.norm().max(1e-300);
    anti.norm() / scale
}

/// Extract the complex-linear operator a real matrix represents, averaging
/// away the (reported) commutation defect with `C`.
pub fn complex_from_real_op(r: &RMat) -> (CMat, f64) {
    let n = r.nrows() / 2;
    let defect = linearity_defect(r);
    let m = CMat::from_fn(n, n, |i, j| {
        let re = 0.5 * (r[(i, j)] + r[(n + i, n + j)]);
        let im = 0.5 * (r[(n + i, j)] - r[(i, n + j)]);
        Complex64::new(re, im)
    });
    (m, defect)
}

/// Hilbert–Schmidt inner product `tr(AᴴB)`.
pub fn hs_inner(a: &CMat, b: &CMat) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.conj() * y;
    }
    acc
}

/// Hilbert–Schmidt norm.
pub fn hs_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Commutator `AB - BA`.
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Operator (spectral) norm via SVD.
pub fn op_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().max()
}

/// Operator norm of a real matrix.
pub fn op_norm_real(a: &RMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().max()
}

/// Orthonormalize columns by modified Gram–Schmidt with one
/// re-orthogonalization pass. Errors if a column drops below `rank_tol`
/// times its original norm (rank deficiency).
pub fn orthonormalize_columns(m: &RMat, rank_tol: f64) -> crate::Result<RMat> {
    let mut q = m.clone();
    let ncols = q.ncols();
    for j in 0..ncols {
        let orig = q.column(j).norm();
        for _pass in 0..2 {
            for i in 0..j {
                let qi = q.column(i).clone_owned();
                let proj = qi.dot(&q.column(j).clone_owned());
                let new_col = q.column(j) - proj * &qi;
                q.set_column(j, &new_col);
            }
        }
        let nrm = q.column(j).norm();
        if nrm <= rank_tol * orig.max(1.0) {
            return Err(crate::Error::invalid(format!(
                "column {j} became dependent during orthonormalization (norm ratio {:.3e})",
                nrm / orig.max(1e-300)
            )));
        }
        let scaled = q.column(j) / nrm;
        q.set_column(j, &scaled);
    }
    Ok(q)
}

/// Numerical rank: singular values above `rel_tol` times the largest.
pub fn numerical_rank(m: &RMat, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let top = sv.max();
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Largest principal-angle sine of `a` against `b`: `‖(1 - P_b) a‖₂` for
/// orthonormal bases `a`, `b`. Zero iff `span a ⊆ span b`. Stable for
/// small angles (no `sqrt(1 - cos²)` cancellation).
pub fn containment_defect(a: &RMat, b: &RMat) -> f64 {
    if a.ncols() == 0 {
        return 0.0;
    }
    if b.ncols() == 0 {
        return op_norm_real(a);
    }
    let proj = b * (b.transpose() * a);
    op_norm_real(&(a - proj))
}

/// Symmetric subspace distance: max of the two containment defects.
/// Zero iff the spans coincide.
pub fn subspace_distance(a: &RMat, b: &RMat) -> f64 {
    containment_defect(a, b).max(containment_defect(b, a))
}

/// Orthonormal basis of the orthogonal complement of `span m` in `R^rows`.
pub fn orthogonal_complement(m: &RMat, rel_tol: f64) -> RMat {
    let rows = m.nrows();
    if m.ncols() == 0 {
        return RMat::identity(rows, rows);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.as_ref().expect("svd with u requested");
    let top = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > rel_tol * top.max(1e-300))
        .count();
    // Columns of u beyond the rank span the complement only up to
    // `min(rows, cols)`; complete with a projector-based fill when the SVD
    // is thin.
    let mut basis_cols: Vec<RVec> = Vec::new();
    for j in rank..u.ncols() {
        basis_cols.push(u.column(j).clone_owned());
    }
    if basis_cols.len() < rows - rank {
        // Thin SVD: complete by projecting coordinate vectors.
        let have = u.columns(0, rank).clone_owned();
        let mut acc = have;
        for k in 0..rows {
            if acc.ncols() == rows {
                break;
            }
            let mut e = RVec::zeros(rows);
            e[k] = 1.0;
            let resid = &e - &acc * (acc.transpose() * &e);
            if resid.norm() > 1e-8 {
                let resid = resid.normalize();
                acc = RMat::from_columns(
                    &acc.column_iter()
                        .map(|c| c.clone_owned())
                        .chain(std::iter::once(resid))
                        .collect::<Vec<_>>(),
                );
            }
        }
        basis_cols = acc
            .column_iter()
            .skip(rank)
            .map(|c| c.clone_owned())
            .collect();
    }
    if basis_cols.is_empty() {
        RMat::zeros(rows, 0)
    } else {
        RMat::from_columns(&basis_cols)
    }
}

fn faer_from_cmat(m: &CMat) -> faer::Mat<faer::c64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        faer::c64::new(z.re, z.im)
    })
}

/// Hermitian eigendecomposition, eigenvalues ascending, `h ≈ V diag(w) Vᴴ`.
/// The input is symmetrized before factorization.
pub fn hermitian_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    assert_eq!(n, h.ncols());
    let sym = CMat::from_fn(n, n, |i, j| 0.5 * (h[(i, j)] + h[(j, i)].conj()));
    if n <= FAER_THRESHOLD {
        let eig = sym.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .partial_cmp(&eig.eigenvalues[b])
                .expect("finite eigenvalues")
        });
        let vals: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vecs = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        (vals, vecs)
    } else {
        let fm = faer_from_cmat(&sym);
        let eig = fm
            .self_adjoint_eigen(faer::Side::Lower)
            .expect("hermitian eigendecomposition");
        let s = eig.S().column_vector().to_owned();
        let u = eig.U();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| s[a].re.partial_cmp(&s[b].re).expect("finite eigenvalues"));
        let vals: Vec<f64> = order.iter().map(|&k| s[k].re).collect();
        let vecs = CMat::from_fn(n, n, |i, j| {
            let z = u[(i, order[j])];
            Complex64::new(z.re, z.im)
        });
        (vals, vecs)
    }
}

/// Real symmetric eigendecomposition, eigenvalues ascending.
pub fn real_symmetric_eigen(h: &RMat) -> (Vec<f64>, RMat) {
    let n = h.nrows();
    let sym = RMat::from_fn(n, n, |i, j| 0.5 * (h[(i, j)] + h[(j, i)]));
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("finite eigenvalues")
    });
    let vals: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = RMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (vals, vecs)
}

/// Eigendecomposition of a *normal* (in practice: unitary) matrix using
/// only Hermitian solvers: diagonalize the Hermitian part, then the
/// anti-Hermitian part restricted to each eigenvalue cluster. Returns
/// `(eigenvalues, orthonormal eigenvector columns)`.
///
/// Cluster boundaries only influence performance of downstream consumers,
/// not correctness: callers re-impose every original constraint on the
/// candidate space this produces.
pub fn normal_eigen(u: &CMat) -> (Vec<Complex64>, CMat) {
    let n = u.nrows();
    let h_plus = CMat::from_fn(n, n, |i, j| 0.5 * (u[(i, j)] + u[(j, i)].conj()));
    let h_minus = CMat::from_fn(n, n, |i, j| {
        let z = u[(i, j)] - u[(j, i)].conj();
        Complex64::new(0.5 * z.im, -0.5 * z.re)
    });
    let (vals_p, vecs_p) = hermitian_eigen(&h_plus);
    let scale = vals_p
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    let cluster_tol = 1e-8 * scale;
    let mut vectors = CMat::zeros(n, n);
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (vals_p[end] - vals_p[end - 1]).abs() <= cluster_tol {
            end += 1;
        }
        let block = vecs_p.columns(start, end - start).clone_owned();
        let restricted = block.adjoint() * &h_minus * &block;
        let (_, small_vecs) = hermitian_eigen(&restricted);
        let rotated = &block * &small_vecs;
        for (offset, col) in rotated.column_iter().enumerate() {
            let j = start + offset;
            vectors.set_column(j, &col.clone_owned());
            let v = col.clone_owned();
            let uv = u * &v;
            values[j] = v.dotc(&uv);
        }
        start = end;
    }
    (values, vectors)
}

/// `‖AᵀηA - η‖` residual for a 4×4 Lorentz-candidate matrix (signature
/// `diag(1,-1,-1,-1)` fixed crate-wide).
pub fn lorentz_defect(lambda: &nalgebra::Matrix4<f64>) -> f64 {
    let eta = nalgebra::Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0));
    (lambda.transpose() * eta * lambda - eta).norm()
}
