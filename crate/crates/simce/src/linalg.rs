//! Complex dense linear algebra helpers.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>` throughout the crate. The chain
//! products in the estimator are the hot path, so plain products are routed
//! through `matrixmultiply`'s complex gemm kernels instead of nalgebra's
//! generic loop; the adjoint variants avoid materializing the transposed
//! operand by passing swapped strides.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

const ONE: [f64; 2] = [1.0, 0.0];
const ZERO: [f64; 2] = [0.0, 0.0];

/// `Complex64` is repr(C) `{ re: f64, im: f64 }`, matching the `[f64; 2]`
/// element layout matrixmultiply expects.
#[inline]
fn as_gemm(m: &CMat) -> *const [f64; 2] {
    m.as_slice().as_ptr() as *const [f64; 2]
}

/// `a * b` via the cgemm kernel.
pub fn mul(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.ncols(), b.nrows(), "mul: inner dimensions");
    let (m, k, n) = (a.nrows(), a.ncols(), b.ncols());
    let mut out = CMat::zeros(m, n);
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            m,
            k,
            n,
            ONE,
            as_gemm(a),
            1,
            m as isize,
            as_gemm(b),
            1,
            k as isize,
            ZERO,
            out.as_mut_slice().as_mut_ptr() as *mut [f64; 2],
            1,
            m as isize,
        );
    }
    out
}

/// `a.adjoint() * b` without materializing the adjoint.
pub fn adjoint_mul(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.nrows(), b.nrows(), "adjoint_mul: inner dimensions");
    let (m, k, n) = (a.ncols(), a.nrows(), b.ncols());
    let mut out = CMat::zeros(m, n);
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Conjugate,
            matrixmultiply::CGemmOption::Standard,
            m,
            k,
            n,
            ONE,
            // A = a^H: A[i,j] = conj(a[j,i]) -> row stride = column stride of a.
            as_gemm(a),
            k as isize,
            1,
            as_gemm(b),
            1,
            k as isize,
            ZERO,
            out.as_mut_slice().as_mut_ptr() as *mut [f64; 2],
            1,
            m as isize,
        );
    }
    out
}

/// `a * b.adjoint()` without materializing the adjoint.
pub fn mul_adjoint(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.ncols(), b.ncols(), "mul_adjoint: inner dimensions");
    let (m, k, n) = (a.nrows(), a.ncols(), b.nrows());
    let mut out = CMat::zeros(m, n);
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Conjugate,
            m,
            k,
            n,
            ONE,
            as_gemm(a),
            1,
            m as isize,
            as_gemm(b),
            b.nrows() as isize,
            1,
            ZERO,
            out.as_mut_slice().as_mut_ptr() as *mut [f64; 2],
            1,
            m as isize,
        );
    }
    out
}

/// `a * diag(d)`: scales column `j` by `d[j]`.
pub fn scale_cols(a: &CMat, d: &[Complex64]) -> CMat {
    assert_eq!(a.ncols(), d.len(), "scale_cols: diagonal length");
    let mut out = a.clone();
    for (j, &f) in d.iter().enumerate() {
        for v in out.column_mut(j).iter_mut() {
            *v *= f;
        }
    }
    out
}

/// `diag(d) * a`: scales row `i` by `d[i]`.
pub fn scale_rows(d: &[Complex64], a: &CMat) -> CMat {
    assert_eq!(a.nrows(), d.len(), "scale_rows: diagonal length");
    let mut out = a.clone();
    for j in 0..out.ncols() {
        for (i, v) in out.column_mut(j).iter_mut().enumerate() {
            *v *= d[i];
        }
    }
    out
}

/// Squared Frobenius norm.
pub fn frob_sq(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Real part of the trace.
pub fn trace_re(a: &CMat) -> f64 {
    a.diagonal().iter().map(|z| z.re).sum()
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues (ascending) and
/// the unitary eigenvector matrix.
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    let eig = a.clone().symmetric_eigen();
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = a.nrows();
    let mut vecs = CMat::zeros(n, n);
    for (c, &i) in idx.iter().enumerate() {
        vecs.set_column(c, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Hermitian square root `Q diag(sqrt(max(lambda, 0))) Q^H`.
///
/// Eigenvalues in `[-tol, 0)` are clipped to zero; anything more negative is a
/// hard error since the inputs are PSD by construction and only rounding noise
/// is tolerated.
pub fn hermitian_sqrt(a: &CMat, neg_tol: f64) -> Result<CMat> {
    let (vals, q) = hermitian_eigen(a);
    let mut clipped = Vec::with_capacity(vals.len());
    for &v in &vals {
        if v < -neg_tol {
            return Err(Error::Numerical(format!(
                "matrix square root: eigenvalue {v:.3e} below -{neg_tol:.1e}; input is not PSD"
            )));
        }
        clipped.push(v.max(0.0).sqrt());
    }
    let scaled = scale_cols(&q, &to_complex(&clipped));
    Ok(mul_adjoint(&scaled, &q))
}

fn to_complex(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

/// Cholesky factor of a Hermitian positive-definite matrix, retried once with
/// diagonal loading `1e-12 * tr/n` when the factorization fails.
pub fn cholesky_loaded(a: &CMat) -> Result<nalgebra::Cholesky<Complex64, nalgebra::Dyn>> {
    if let Some(c) = a.clone().cholesky() {
        return Ok(c);
    }
    let n = a.nrows();
    let load = 1e-12 * trace_re(a) / n as f64;
    let loaded = a + CMat::identity(n, n) * Complex64::new(load, 0.0);
    loaded.cholesky().ok_or_else(|| {
        Error::Numerical(format!(
            "Cholesky failed even with diagonal loading {load:.3e} (n = {n})"
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn test_mat(r: usize, c: usize, seed: u64) -> CMat {
        let mut s = seed;
        CMat::from_fn(r, c, |_, _| {
            // xorshift, good enough for deterministic fixtures
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            let re = (s % 1000) as f64 / 500.0 - 1.0;
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            let im = (s % 1000) as f64 / 500.0 - 1.0;
            Complex64::new(re, im)
        })
    }

    #[test]
    fn gemm_matches_nalgebra() {
        let a = test_mat(7, 5, 3);
        let b = test_mat(5, 9, 17);
        let fast = mul(&a, &b);
        let slow = &a * &b;
        assert_relative_eq!(frob_sq(&(fast - slow)), 0.0, epsilon = 1e-22);
    }

    #[test]
    fn adjoint_variants_match_nalgebra() {
        let a = test_mat(6, 4, 5);
        let b = test_mat(6, 3, 7);
        let fast = adjoint_mul(&a, &b);
        let slow = a.adjoint() * &b;
        assert_relative_eq!(frob_sq(&(fast - slow)), 0.0, epsilon = 1e-22);

        let c = test_mat(5, 4, 11);
        let d = test_mat(8, 4, 13);
        let fast = mul_adjoint(&c, &d);
        let slow = &c * d.adjoint();
        assert_relative_eq!(frob_sq(&(fast - slow)), 0.0, epsilon = 1e-22);
    }

    #[test]
    fn diagonal_scaling() {
        let a = test_mat(4, 3, 23);
        let d: Vec<Complex64> = (0..3).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let want = &a * CMat::from_diagonal(&CVec::from_row_slice(&d));
        assert_relative_eq!(frob_sq(&(scale_cols(&a, &d) - want)), 0.0, epsilon = 1e-24);

        let d: Vec<Complex64> = (0..4).map(|i| Complex64::new(1.0, i as f64)).collect();
        let want = CMat::from_diagonal(&CVec::from_row_slice(&d)) * &a;
        assert_relative_eq!(frob_sq(&(scale_rows(&d, &a) - want)), 0.0, epsilon = 1e-24);
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        let x = test_mat(8, 8, 31);
        let h = mul_adjoint(&x, &x);
        let (vals, q) = hermitian_eigen(&h);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]), "ascending order");
        let lam = to_complex(&vals);
        let recon = mul_adjoint(&scale_cols(&q, &lam), &q);
        let rel = frob_sq(&(recon - &h)) / frob_sq(&h);
        assert!(rel < 1e-24, "reconstruction rel err {rel:.3e}");
    }

    #[test]
    fn hermitian_sqrt_squares_back() {
        let x = test_mat(6, 6, 41);
        let h = mul_adjoint(&x, &x);
        let s = hermitian_sqrt(&h, 1e-10).unwrap();
        let rel = frob_sq(&(mul_adjoint(&s, &s) - &h)) / frob_sq(&h);
        assert!(rel < 1e-20, "sqrt rel err {rel:.3e}");
    }

    #[test]
    fn hermitian_sqrt_rejects_indefinite() {
        let mut h = CMat::identity(3, 3);
        h[(2, 2)] = Complex64::new(-0.5, 0.0);
        assert!(hermitian_sqrt(&h, 1e-10).is_err());
    }

    #[test]
    fn cholesky_solves() {
        let x = test_mat(5, 5, 53);
        let h = mul_adjoint(&x, &x) + CMat::identity(5, 5);
        let b = test_mat(5, 2, 59);
        let sol = cholesky_loaded(&h).unwrap().solve(&b);
        let resid = frob_sq(&(&h * sol - &b));
        assert!(resid < 1e-20, "residual {resid:.3e}");
    }
}
