//! Thin wrappers around dense complex linear algebra.
//!
//! Everything in this crate runs at desk scale (ambient dimensions below ~50),
//! so dense factorizations are exact to machine precision and nothing here
//! tries to be clever about sparsity or blocking.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{CartanError, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

/// Singular values, descending, through the Hermitian eigensystem of the
/// smaller Gram matrix. The squaring costs accuracy only on the small
/// singular values (absolute error of order `√ε·σ₁`); the large ones carry
/// full relative precision.
pub fn singular_values_desc(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let gram = if m.nrows() <= m.ncols() {
        m * m.adjoint()
    } else {
        m.adjoint() * m
    };
    let (vals, _) = hermitian_eigen(&gram);
    vals.iter().map(|l| l.max(0.0).sqrt()).collect()
}

/// Largest singular value of a dense complex matrix.
pub fn sigma_max(m: &CMat) -> f64 {
    singular_values_desc(m).first().copied().unwrap_or(0.0)
}

/// Full SVD, singular values descending.
///
/// nalgebra's complex SVD occasionally returns an inaccurate factorization
/// (observed on rank-deficient inputs), so the result is residual-checked and
/// falls back to the augmented Hermitian eigenproblem `[[0, M], [M*, 0]]`,
/// whose eigenpairs `(±σ, (u; ±v)/√2)` the symmetric solver handles stably.
pub fn svd(m: &CMat) -> Result<(CMat, Vec<f64>, CMat)> {
    let fast = m.clone().svd(true, true);
    if let (Some(u), Some(v_t)) = (fast.u, fast.v_t) {
        let s: Vec<f64> = fast.singular_values.iter().copied().collect();
        let mut idx: Vec<usize> = (0..s.len()).collect();
        idx.sort_by(|&a, &b| s[b].partial_cmp(&s[a]).unwrap());
        let sorted: Vec<f64> = idx.iter().map(|&i| s[i]).collect();
        let mut us = CMat::zeros(u.nrows(), idx.len());
        let mut vts = CMat::zeros(idx.len(), v_t.ncols());
        for (new, &old) in idx.iter().enumerate() {
            us.set_column(new, &u.column(old));
            vts.set_row(new, &v_t.row(old));
        }
        let mut resid = -m;
        for (k, &sv) in sorted.iter().enumerate() {
            for row in 0..m.nrows() {
                for col in 0..m.ncols() {
                    resid[(row, col)] += us[(row, k)] * C64::new(sv, 0.0) * vts[(k, col)];
                }
            }
        }
        let scale = 1.0 + sorted.first().copied().unwrap_or(0.0);
        if max_abs(&resid) <= 1e-12 * scale {
            return Ok((us, sorted, vts));
        }
    }
    svd_via_augmented(m)
}

fn svd_via_augmented(m: &CMat) -> Result<(CMat, Vec<f64>, CMat)> {
    let (s, r) = (m.nrows(), m.ncols());
    let k = s.min(r);
    let n = s + r;
    let mut h = CMat::zeros(n, n);
    for i in 0..s {
        for j in 0..r {
            h[(i, s + j)] = m[(i, j)];
            h[(s + j, i)] = m[(i, j)].conj();
        }
    }
    let (vals, vecs) = hermitian_eigen(&h);
    let sqrt2 = C64::new(std::f64::consts::SQRT_2, 0.0);
    let top = vals.first().copied().unwrap_or(0.0).max(0.0);
    let mut u = CMat::zeros(s, k);
    let mut v_t = CMat::zeros(k, r);
    let mut sigmas = Vec::with_capacity(k);
    let mut filled = 0usize;
    for i in 0..k {
        let sigma = vals[i].max(0.0);
        sigmas.push(sigma);
        if sigma > 1e-14 * (1.0 + top) {
            for row in 0..s {
                u[(row, i)] = vecs[(row, i)] * sqrt2;
            }
            for col in 0..r {
                v_t[(i, col)] = (vecs[(s + col, i)] * sqrt2).conj();
            }
            filled = i + 1;
        }
    }
    // null directions: complete the bases orthonormally
    complete_columns(&mut u, filled);
    complete_rows(&mut v_t, filled);
    Ok((u, sigmas, v_t))
}

fn complete_columns(u: &mut CMat, from: usize) {
    let (s, k) = (u.nrows(), u.ncols());
    let mut next = from;
    let mut cand = 0usize;
    while next < k && cand < 4 * s {
        let mut w = CVec::zeros(s);
        w[cand % s] = if cand < s { ONE } else { C64::new(0.0, 1.0) };
        for j in 0..next {
            let proj: C64 = (0..s).map(|row| w[row] * u[(row, j)].conj()).sum();
            for row in 0..s {
                let uj = u[(row, j)];
                w[row] -= proj * uj;
            }
        }
        let nw = w.norm();
        if nw > 0.3 {
            for row in 0..s {
                u[(row, next)] = w[row] / C64::new(nw, 0.0);
            }
            next += 1;
        }
        cand += 1;
    }
}

fn complete_rows(v_t: &mut CMat, from: usize) {
    let mut vt_as_cols = v_t.adjoint();
    complete_columns(&mut vt_as_cols, from);
    *v_t = vt_as_cols.adjoint();
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues descending with
/// matching orthonormal eigenvector columns.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    // Symmetrize to kill rounding skew before handing to the solver.
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let vals: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (new, &old) in idx.iter().enumerate() {
        vecs.set_column(new, &eig.eigenvectors.column(old));
    }
    (vals, vecs)
}

/// Eigendecomposition of a real symmetric matrix, eigenvalues descending.
pub fn real_symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let h = (m + m.transpose()).scale(0.5);
    let eig = h.symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let vals: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = DMatrix::<f64>::zeros(n, n);
    for (new, &old) in idx.iter().enumerate() {
        vecs.set_column(new, &eig.eigenvectors.column(old));
    }
    (vals, vecs)
}

/// Solve `m x = b` by LU with partial pivoting.
pub fn lu_solve(m: &CMat, b: &CVec) -> Result<CVec> {
    m.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| CartanError::Singular("LU solve failed: matrix is singular".into()))
}

/// Apply a real function to a Hermitian matrix through its eigensystem.
///
/// Small negative eigenvalues (rounding noise of a PSD operator) are clamped
/// to zero before `f` is applied.
pub fn hermitian_matrix_function(m: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let (vals, vecs) = hermitian_eigen(m);
    let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut out = CMat::zeros(m.nrows(), m.ncols());
    for (i, &lambda) in vals.iter().enumerate() {
        let clamped = if lambda < 0.0 && lambda > -1e-12 * scale.max(1.0) {
            0.0
        } else {
            lambda
        };
        let flam = f(clamped);
        if !flam.is_finite() {
            return Err(CartanError::Singular(format!(
                "matrix function produced a non-finite value at eigenvalue {lambda:.3e}"
            )));
        }
        let v = vecs.column(i);
        // out += f(lambda) v v^H
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                out[(r, c)] += C64::new(flam, 0.0) * v[r] * v[c].conj();
            }
        }
    }
    Ok(out)
}

/// Max absolute entry, a cheap matrix gauge for tolerances.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn svd_of_diag_is_sorted() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![c(0.3, 0.0), c(0.9, 0.0)]));
        let (_, s, _) = svd(&m).unwrap();
        assert!((s[0] - 0.9).abs() < 1e-14);
        assert!((s[1] - 0.3).abs() < 1e-14);
    }

    #[test]
    fn hermitian_function_square_root() {
        let m = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let r = hermitian_matrix_function(&m, f64::sqrt).unwrap();
        let back = &r * &r;
        assert!(max_abs(&(&back - &m)) < 1e-12);
    }

    #[test]
    fn lu_solve_roundtrip() {
        let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.5), c(0.2, 0.0), c(0.0, -0.3), c(2.0, 0.0)]);
        let b = CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0)]);
        let x = lu_solve(&m, &b).unwrap();
        let r = &m * &x - &b;
        assert!(r.iter().all(|z| z.norm() < 1e-13));
    }
}
