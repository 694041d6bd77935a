use std::sync::Arc;

use crate::eja::{same_algebra, Algebra, Element};
use crate::error::{Error, Result};
use crate::linalg::{max_abs_diff, Mat};

/// A linear map between algebras, stored as a matrix in their coordinates
/// (rows index the codomain).
#[derive(Clone, Debug)]
pub struct LinearMap {
    domain: Arc<Algebra>,
    codomain: Arc<Algebra>,
    matrix: Mat,
}

impl LinearMap {
    pub fn new(domain: &Arc<Algebra>, codomain: &Arc<Algebra>, matrix: Mat) -> Result<LinearMap> {
        if matrix.nrows() != codomain.ambient_dim() || matrix.ncols() != domain.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: codomain.ambient_dim() * domain.ambient_dim(),
                actual: matrix.nrows() * matrix.ncols(),
            });
        }
        Ok(LinearMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix,
        })
    }

    pub fn identity(alg: &Arc<Algebra>) -> LinearMap {
        let n = alg.ambient_dim();
        LinearMap {
            domain: alg.clone(),
            codomain: alg.clone(),
            matrix: Mat::identity(n, n),
        }
    }

    /// Tabulate `f` on the coordinate basis of `domain`.
    pub fn from_fn(
        domain: &Arc<Algebra>,
        codomain: &Arc<Algebra>,
        f: impl Fn(&Element) -> Result<Element>,
    ) -> Result<LinearMap> {
        let n = domain.ambient_dim();
        let mut m = Mat::zeros(codomain.ambient_dim(), n);
        for j in 0..n {
            let y = f(&Element::basis(domain, j))?;
            if !same_algebra(y.algebra(), codomain) {
                return Err(Error::AlgebraMismatch {
                    left: y.algebra().family().to_string(),
                    right: codomain.family().to_string(),
                });
            }
            m.set_column(j, &nalgebra::DVector::from_column_slice(y.coords()));
        }
        LinearMap::new(domain, codomain, m)
    }

    pub fn domain(&self) -> &Arc<Algebra> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Algebra> {
        &self.codomain
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if !same_algebra(x.algebra(), &self.domain) {
            return Err(Error::AlgebraMismatch {
                left: x.algebra().family().to_string(),
                right: self.domain.family().to_string(),
            });
        }
        let v = &self.matrix * nalgebra::DVector::from_column_slice(x.coords());
        Element::new(&self.codomain, v.as_slice().to_vec())
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        if !same_algebra(&inner.codomain, &self.domain) {
            return Err(Error::AlgebraMismatch {
                left: inner.codomain.family().to_string(),
                right: self.domain.family().to_string(),
            });
        }
        LinearMap::new(&inner.domain, &self.codomain, &self.matrix * &inner.matrix)
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        let inv = self.matrix.clone().try_inverse().ok_or(Error::Singular)?;
        LinearMap::new(&self.codomain, &self.domain, inv)
    }

    /// Adjoint with respect to the trace inner products:
    /// `⟨g(x), y⟩ = ⟨x, g*(y)⟩`.
    pub fn adjoint(&self) -> LinearMap {
        let g_dom = self.domain.gram();
        let g_cod = self.codomain.gram();
        let g_dom_inv = g_dom.try_inverse().expect("trace form is positive definite");
        LinearMap {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            matrix: g_dom_inv * self.matrix.transpose() * g_cod,
        }
    }

    /// 2-norm condition number of the coordinate matrix.
    pub fn condition_number(&self) -> f64 {
        let sv = self.matrix.clone().svd(false, false).singular_values;
        let max = sv.iter().cloned().fold(0.0, f64::max);
        let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    pub fn max_diff(&self, other: &LinearMap) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }
}
