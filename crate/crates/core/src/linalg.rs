//! Dense linear-algebra helpers on top of `nalgebra`, plus the cyclic Jacobi
//! eigensolver used by every spectral computation in the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::eja::matrix::FieldMatrix;
use crate::field::Hc;

pub type Mat = DMatrix<f64>;
pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Relative off-diagonal threshold for Jacobi convergence.
pub const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a real symmetric matrix, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    /// Columns are orthonormal eigenvectors, in the order of `values`.
    pub vectors: Mat,
}

/// Cyclic Jacobi on a real symmetric matrix. Only the upper triangle is
/// trusted; the input is symmetrised first.
pub fn jacobi_eigh(input: &Mat) -> SymEigen {
    let n = input.nrows();
    assert_eq!(n, input.ncols(), "jacobi_eigh needs a square matrix");
    let mut a = (input + input.transpose()) * 0.5;
    let mut v = Mat::identity(n, n);
    let scale = a.norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[(i, j)] * a[(i, j)];
                }
            }
        }
        if off.sqrt() <= JACOBI_TOL * scale || scale == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = Mat::from_fn(n, n, |r, c| v[(r, order[c])]);
    SymEigen { values, vectors }
}

/// Eigen-decomposition of a complex Hermitian matrix through its real
/// embedding. Eigenvalues descending; eigenvectors are unit columns.
pub fn herm_eigh(m: &CMat) -> (Vec<f64>, Vec<CVec>) {
    let n = m.nrows();
    let fm = FieldMatrix::from_fn(n, 2, |i, j| {
        let z = m[(i, j)];
        let mut h = Hc::ZERO;
        h.0[0] = z.re;
        h.0[1] = z.im;
        h
    });
    let (values, vecs) = fm.eigh();
    let vecs = vecs
        .into_iter()
        .map(|v| CVec::from_iterator(n, v.iter().map(|h| Complex64::new(h.0[0], h.0[1]))))
        .collect();
    (values, vecs)
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub fn herm_apply(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let n = m.nrows();
    let (values, vecs) = herm_eigh(m);
    let mut out = CMat::zeros(n, n);
    for (lam, v) in values.iter().zip(vecs.iter()) {
        out += (v * v.adjoint()) * Complex64::new(f(*lam), 0.0);
    }
    out
}

/// Numerical rank with an absolute singular-value cutoff.
pub fn rank(m: &Mat, tol: f64) -> usize {
    m.clone().svd(false, false).rank(tol)
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn cmax_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Partial trace of an operator on `C^{na} ⊗ C^{nb}`. `keep_first` selects
/// which factor survives.
pub fn partial_trace(m: &CMat, na: usize, nb: usize, keep_first: bool) -> CMat {
    assert_eq!(m.nrows(), na * nb);
    if keep_first {
        CMat::from_fn(na, na, |i, j| {
            (0..nb).map(|k| m[(i * nb + k, j * nb + k)]).sum()
        })
    } else {
        CMat::from_fn(nb, nb, |i, j| {
            (0..na).map(|k| m[(k * nb + i, k * nb + j)]).sum()
        })
    }
}

pub fn to_complex(m: &Mat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}
