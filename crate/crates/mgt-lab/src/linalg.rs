//! Small dense complex linear algebra helpers.
//!
//! Everything in this crate works on 3x3..5x5 matrices, so the routines here
//! favour determinism and simplicity over asymptotics: Faddeev-LeVerrier for
//! characteristic polynomials, complete-pivot elimination for null vectors,
//! nalgebra LU for solves.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Characteristic polynomial of `a` by the Faddeev-LeVerrier recursion.
///
/// Returns monic coefficients in descending powers of lambda,
/// `[1, c1, ..., cn]` with `det(lambda I - A) = lambda^n + c1 lambda^(n-1) + ... + cn`.
pub fn char_poly_coeffs(a: &CMat) -> Vec<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "char_poly_coeffs requires a square matrix");
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    let mut m = a.clone();
    for k in 1..=n {
        let c = -m.trace() / Complex64::new(k as f64, 0.0);
        coeffs.push(c);
        if k < n {
            let mut mc = m.clone();
            for i in 0..n {
                mc[(i, i)] += c;
            }
            m = a * mc;
        }
    }
    coeffs
}

/// Solve `a x = b` by LU with partial pivoting. `None` when singular.
pub fn solve(a: &CMat, b: &CVec) -> Option<CVec> {
    a.clone().lu().solve(b)
}

/// Matrix inverse by LU. `None` when singular.
pub fn inverse(a: &CMat) -> Option<CMat> {
    a.clone().try_inverse()
}

/// Induced 1-norm (maximum absolute column sum).
pub fn one_norm(a: &CMat) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// One unit vector from the (numerical) null space of `a`.
///
/// Complete-pivot Gaussian elimination; the column knocked out last is the
/// free variable. Intended for `a = Psi - lambda I` at a computed eigenvalue,
/// where the matrix has numerical rank n-1.
pub fn null_vector(a: &CMat) -> CVec {
    let n = a.nrows();
    let mut m = a.clone();
    let mut col_perm: Vec<usize> = (0..n).collect();
    let scale = one_norm(a).max(f64::MIN_POSITIVE);

    for k in 0..n.saturating_sub(1) {
        // complete pivoting over the trailing block
        let (mut pi, mut pj, mut pmax) = (k, k, 0.0);
        for i in k..n {
            for j in k..n {
                let v = m[(i, j)].norm();
                if v > pmax {
                    (pi, pj, pmax) = (i, j, v);
                }
            }
        }
        if pmax <= 1e-300 * scale {
            break; // trailing block already zero
        }
        m.swap_rows(k, pi);
        m.swap_columns(k, pj);
        col_perm.swap(k, pj);
        for i in (k + 1)..n {
            let f = m[(i, k)] / m[(k, k)];
            m[(i, k)] = Complex64::new(0.0, 0.0);
            for j in (k + 1)..n {
                let s = m[(k, j)];
                m[(i, j)] -= f * s;
            }
        }
    }

    // free variable in the last permuted column, back-substitute the rest
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    x[n - 1] = Complex64::new(1.0, 0.0);
    for i in (0..n.saturating_sub(1)).rev() {
        let mut s = Complex64::new(0.0, 0.0);
        for j in (i + 1)..n {
            s += m[(i, j)] * x[j];
        }
        let piv = m[(i, i)];
        x[i] = if piv.norm() > 1e-14 * scale {
            -s / piv
        } else {
            Complex64::new(0.0, 0.0)
        };
    }

    let mut out = CVec::zeros(n);
    for (permuted, original) in col_perm.iter().enumerate() {
        out[*original] = x[permuted];
    }
    let nrm = out.norm();
    if nrm > 0.0 {
        out /= Complex64::new(nrm, 0.0);
    }
    out
}

/// Eigenvector matrix for precomputed eigenvalues (columns ordered like `eigenvalues`).
pub fn eigenvectors(a: &CMat, eigenvalues: &[Complex64]) -> CMat {
    let n = a.nrows();
    let mut v = CMat::zeros(n, n);
    for (j, lam) in eigenvalues.iter().enumerate() {
        let mut shifted = a.clone();
        for i in 0..n {
            shifted[(i, i)] -= lam;
        }
        v.set_column(j, &null_vector(&shifted));
    }
    v
}

/// Determinant of a real matrix by partial-pivot elimination.
pub fn real_det(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    if n == 0 {
        return 1.0;
    }
    let mut a = m.clone();
    let mut det = 1.0;
    for k in 0..n {
        let mut p = k;
        for i in (k + 1)..n {
            if a[(i, k)].abs() > a[(p, k)].abs() {
                p = i;
            }
        }
        if a[(p, k)] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap_rows(p, k);
            det = -det;
        }
        det *= a[(k, k)];
        for i in (k + 1)..n {
            let f = a[(i, k)] / a[(k, k)];
            for j in (k + 1)..n {
                let s = a[(k, j)];
                a[(i, j)] -= f * s;
            }
        }
    }
    det
}
