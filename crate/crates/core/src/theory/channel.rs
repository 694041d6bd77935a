use num_complex::Complex64;

use super::{BackendKind, SystemRef};
use crate::cone::LinearMap;
use crate::eja::Element;
use crate::error::{Error, Result};
use crate::linalg::{herm_eigh, CMat, Mat};

/// A transformation between two systems of one backend, stored as a real
/// matrix on process-space coordinates (see [`super::wire`]).
#[derive(Clone, Debug)]
pub struct Channel {
    kind: BackendKind,
    input: usize,
    output: usize,
    matrix: Mat,
}

impl Channel {
    pub fn from_wire_matrix(kind: BackendKind, input: usize, output: usize, matrix: Mat) -> Result<Channel> {
        let (r, c) = (kind.wire_dim(output), kind.wire_dim(input));
        if matrix.shape() != (r, c) {
            return Err(Error::DimensionMismatch {
                expected: r * c,
                actual: matrix.nrows() * matrix.ncols(),
            });
        }
        Ok(Channel {
            kind,
            input,
            output,
            matrix,
        })
    }

    /// Tabulate an operator-level map on the process basis.
    pub fn from_operator_map(
        kind: BackendKind,
        input: usize,
        output: usize,
        f: impl Fn(&CMat) -> CMat,
    ) -> Result<Channel> {
        let cols = kind.wire_dim(input);
        let mut m = Mat::zeros(kind.wire_dim(output), cols);
        for c in 0..cols {
            let y = f(&kind.wire_basis(input, c));
            if y.nrows() != output {
                return Err(Error::DimensionMismatch {
                    expected: output,
                    actual: y.nrows(),
                });
            }
            let w = kind.operator_to_wire(&[output], &y);
            for (r, v) in w.into_iter().enumerate() {
                m[(r, c)] = v;
            }
        }
        Channel::from_wire_matrix(kind, input, output, m)
    }

    /// `X ↦ Σ K X K†`. Real backends must pass real Kraus operators; the
    /// classical backend keeps only the diagonal of the result.
    pub fn from_kraus(kind: BackendKind, input: usize, output: usize, kraus: &[CMat]) -> Result<Channel> {
        for k in kraus {
            if k.shape() != (output, input) {
                return Err(Error::DimensionMismatch {
                    expected: output * input,
                    actual: k.nrows() * k.ncols(),
                });
            }
            if kind == BackendKind::RealQT && k.iter().any(|z| z.im != 0.0) {
                return Err(Error::InvalidInput("real quantum Kraus operators must be real".into()));
            }
        }
        Channel::from_operator_map(kind, input, output, |x| {
            let mut acc = CMat::zeros(output, output);
            for k in kraus {
                acc += k * x * k.adjoint();
            }
            acc
        })
    }

    pub fn identity(kind: BackendKind, n: usize) -> Channel {
        let d = kind.wire_dim(n);
        Channel {
            kind,
            input: n,
            output: n,
            matrix: Mat::identity(d, d),
        }
    }

    /// `X ↦ Xᵀ`; positive but not completely positive for quantum backends.
    pub fn transpose(kind: BackendKind, n: usize) -> Channel {
        Channel::from_operator_map(kind, n, n, |x| x.transpose()).expect("square")
    }

    /// `R = τ ∘ e`: discard the input and prepare `tau`.
    pub fn discard_and_prepare(kind: BackendKind, input: usize, tau: &Element) -> Result<Channel> {
        let t = tau.to_cmat()?;
        let out = t.nrows();
        Channel::from_operator_map(kind, input, out, |x| &t * x.trace())
    }

    pub fn kind(&self) -> BackendKind {
        self.kind
    }

    pub fn input(&self) -> SystemRef {
        SystemRef::new(self.kind, self.input)
    }

    pub fn output(&self) -> SystemRef {
        SystemRef::new(self.kind, self.output)
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    /// Complex-linear action on an arbitrary operator of the input system.
    pub fn apply_operator(&self, x: &CMat) -> CMat {
        let z = self.kind.operator_to_wire_complex(&[self.input], x);
        let out: Vec<Complex64> = (0..self.matrix.nrows())
            .map(|r| {
                z.iter()
                    .enumerate()
                    .map(|(c, zc)| zc * self.matrix[(r, c)])
                    .sum()
            })
            .collect();
        self.kind.wire_to_operator_complex(&[self.output], &out)
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        let alg = self.kind.algebra(self.input)?;
        if x.algebra().family() != alg.family() {
            return Err(Error::AlgebraMismatch {
                left: x.algebra().family().to_string(),
                right: alg.family().to_string(),
            });
        }
        let y = self.apply_operator(&x.to_cmat()?);
        Element::from_cmat(&self.kind.algebra(self.output)?, &y)
    }

    /// Restriction to the state spaces, as a map between algebras.
    pub fn as_linear_map(&self) -> Result<LinearMap> {
        let a = self.kind.algebra(self.input)?;
        let b = self.kind.algebra(self.output)?;
        LinearMap::from_fn(&a, &b, |x| self.apply(x))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Channel) -> Result<Channel> {
        if inner.kind != self.kind || inner.output != self.input {
            return Err(Error::DimensionMismatch {
                expected: self.input,
                actual: inner.output,
            });
        }
        Channel::from_wire_matrix(self.kind, inner.input, self.output, &self.matrix * &inner.matrix)
    }

    /// Unnormalized Choi operator `Σ_ij E_ij ⊗ f(E_ij)`.
    pub fn choi(&self) -> CMat {
        let (n, m) = (self.input, self.output);
        let mut c = CMat::zeros(n * m, n * m);
        for i in 0..n {
            for j in 0..n {
                let mut e = CMat::zeros(n, n);
                e[(i, j)] = Complex64::new(1.0, 0.0);
                let fe = self.apply_operator(&e);
                c += e.kronecker(&fe);
            }
        }
        c
    }

    /// `e_B ∘ f = e_A`: trace preservation on the whole process space.
    pub fn is_deterministic(&self, tol: f64) -> bool {
        (0..self.matrix.ncols()).all(|c| {
            let b = self.kind.wire_basis(self.input, c);
            let fb = self.apply_operator(&b);
            (fb.trace() - b.trace()).norm() <= tol
        })
    }

    pub fn is_completely_positive(&self, tol: f64) -> bool {
        let c = self.choi();
        let herm = (&c + c.adjoint()) * Complex64::new(0.5, 0.0);
        if crate::linalg::cmax_abs_diff(&c, &herm) > tol {
            return false;
        }
        let (vals, _) = herm_eigh(&herm);
        vals.iter().all(|&l| l >= -tol * (1.0 + c.norm()))
    }

    pub fn inverse(&self) -> Result<Channel> {
        if !self.matrix.is_square() {
            return Err(Error::Singular);
        }
        let inv = self.matrix.clone().try_inverse().ok_or(Error::Singular)?;
        Channel::from_wire_matrix(self.kind, self.output, self.input, inv)
    }

    /// Reversible: invertible with a channel inverse.
    pub fn is_reversible(&self, tol: f64) -> bool {
        is_channel(self, tol) && self.inverse().is_ok_and(|inv| is_channel(&inv, tol))
    }
}

/// A transformation is a channel iff it preserves the deterministic effect
/// and is completely positive (Choi operator positive semidefinite).
pub fn is_channel(ch: &Channel, tol: f64) -> bool {
    ch.is_deterministic(tol) && ch.is_completely_positive(tol)
}

pub fn apply_channel(ch: &Channel, x: &Element) -> Result<Element> {
    ch.apply(x)
}
