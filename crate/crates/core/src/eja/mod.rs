//! Euclidean Jordan algebras: the four matrix families `Herm_r(R)`,
//! `Herm_r(C)`, `Herm_r(H)`, `Herm_3(O)`, spin factors and direct sums.
//!
//! Every algebra has a fixed real coordinate system. Matrix families use the
//! orthonormal coordinates described in [`matrix`]; `Spin(d)` uses `(t, v)`
//! with `t` scalar and `v ∈ R^{d-1}`, where `⟨x, y⟩ = 2(st + u·v)`; a direct
//! sum concatenates the coordinates of its summands.

pub mod classify;
pub mod matrix;

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use num_complex::Complex64;

use crate::field::Hc;
use crate::linalg::{CMat, Mat};
use matrix::FieldMatrix;

pub use classify::{classify_simple, is_simple, SimplicityReport};

/// Default absolute tolerance, scaled by operand magnitude where applicable.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    RealSym(usize),
    ComplexHerm(usize),
    QuatHerm(usize),
    Spin(usize),
    OctHerm3,
    DirectSum(Vec<Family>),
}

impl Family {
    /// `(rank, dim)` from the classification table; `None` for invalid sizes.
    pub fn rank_dim(&self) -> Option<(usize, usize)> {
        match *self {
            Family::RealSym(r) if r >= 1 => Some((r, r * (r + 1) / 2)),
            Family::ComplexHerm(r) if r >= 1 => Some((r, r * r)),
            Family::QuatHerm(r) if r >= 1 => Some((r, r * (2 * r - 1))),
            Family::Spin(d) if d >= 2 => Some((2, d)),
            Family::OctHerm3 => Some((3, 27)),
            Family::DirectSum(ref parts) if !parts.is_empty() => {
                let mut acc = (0, 0);
                for p in parts {
                    let (r, d) = p.rank_dim()?;
                    acc.0 += r;
                    acc.1 += d;
                }
                Some(acc)
            }
            _ => None,
        }
    }

    fn matrix_shape(&self) -> Option<(usize, usize)> {
        match *self {
            Family::RealSym(r) => Some((r, 1)),
            Family::ComplexHerm(r) => Some((r, 2)),
            Family::QuatHerm(r) => Some((r, 4)),
            Family::OctHerm3 => Some((3, 8)),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::RealSym(r) => write!(f, "RealSym({r})"),
            Family::ComplexHerm(r) => write!(f, "ComplexHerm({r})"),
            Family::QuatHerm(r) => write!(f, "QuatHerm({r})"),
            Family::Spin(d) => write!(f, "Spin({d})"),
            Family::OctHerm3 => write!(f, "OctHerm3"),
            Family::DirectSum(parts) => {
                write!(f, "DirectSum(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Algebra {
    family: Family,
    rank: usize,
    dim: usize,
    summands: Vec<Arc<Algebra>>,
    offsets: Vec<usize>,
}

/// Build an algebra of the given family.
pub fn make_algebra(family: Family) -> Result<Arc<Algebra>> {
    Algebra::new(family).map(Arc::new)
}

impl Algebra {
    pub fn new(family: Family) -> Result<Algebra> {
        let (rank, dim) = family
            .rank_dim()
            .ok_or_else(|| Error::InvalidParameter(format!("{family:?}")))?;
        let mut summands = Vec::new();
        let mut offsets = Vec::new();
        if let Family::DirectSum(parts) = &family {
            let mut off = 0;
            for p in parts {
                let a = Algebra::new(p.clone())?;
                offsets.push(off);
                off += a.dim;
                summands.push(Arc::new(a));
            }
        }
        Ok(Algebra {
            family,
            rank,
            dim,
            summands,
            offsets,
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Length of a coordinate vector; equal to `dim` for every family.
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn summands(&self) -> &[Arc<Algebra>] {
        &self.summands
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn has_spectral_support(&self) -> bool {
        match &self.family {
            Family::OctHerm3 => false,
            Family::DirectSum(_) => self.summands.iter().all(|s| s.has_spectral_support()),
            _ => true,
        }
    }

    pub fn unit_coords(&self) -> Vec<f64> {
        match &self.family {
            Family::Spin(d) => {
                let mut c = vec![0.0; *d];
                c[0] = 1.0;
                c
            }
            Family::DirectSum(_) => self.summands.iter().flat_map(|s| s.unit_coords()).collect(),
            _ => {
                let (n, _) = self.family.matrix_shape().unwrap();
                let mut c = vec![0.0; self.dim];
                c[..n].iter_mut().for_each(|v| *v = 1.0);
                c
            }
        }
    }

    pub fn product_coords(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        match &self.family {
            Family::Spin(_) => {
                let (s, u) = (x[0], &x[1..]);
                let (t, v) = (y[0], &y[1..]);
                let mut out = Vec::with_capacity(x.len());
                out.push(s * t + dot(u, v));
                out.extend(u.iter().zip(v).map(|(ui, vi)| s * vi + t * ui));
                out
            }
            Family::DirectSum(_) => {
                let mut out = Vec::with_capacity(self.dim);
                for (s, &off) in self.summands.iter().zip(&self.offsets) {
                    let r = off..off + s.dim;
                    out.extend(s.product_coords(&x[r.clone()], &y[r]));
                }
                out
            }
            _ => {
                let (n, k) = self.family.matrix_shape().unwrap();
                let xm = FieldMatrix::from_coords(n, k, x);
                let ym = FieldMatrix::from_coords(n, k, y);
                xm.jordan(&ym).to_coords()
            }
        }
    }

    pub fn trace_coords(&self, x: &[f64]) -> f64 {
        match &self.family {
            Family::Spin(_) => 2.0 * x[0],
            Family::DirectSum(_) => self
                .summands
                .iter()
                .zip(&self.offsets)
                .map(|(s, &off)| s.trace_coords(&x[off..off + s.dim]))
                .sum(),
            _ => {
                let (n, _) = self.family.matrix_shape().unwrap();
                x[..n].iter().sum()
            }
        }
    }

    /// `tr(x ∘ y)` through the closed form for each family.
    pub fn inner_coords(&self, x: &[f64], y: &[f64]) -> f64 {
        match &self.family {
            Family::Spin(_) => 2.0 * dot(x, y),
            Family::DirectSum(_) => self
                .summands
                .iter()
                .zip(&self.offsets)
                .map(|(s, &off)| s.inner_coords(&x[off..off + s.dim], &y[off..off + s.dim]))
                .sum(),
            _ => dot(x, y),
        }
    }

    /// Gram matrix of the trace inner product in coordinates.
    pub fn gram(&self) -> Mat {
        let n = self.dim;
        Mat::from_fn(n, n, |i, j| {
            let mut ei = vec![0.0; n];
            let mut ej = vec![0.0; n];
            ei[i] = 1.0;
            ej[j] = 1.0;
            self.inner_coords(&ei, &ej)
        })
    }

    /// Eigenvalues and primitive idempotents (as coordinates), eigenvalues
    /// descending.
    pub fn spectral_coords(&self, x: &[f64]) -> Result<Vec<(f64, Vec<f64>)>> {
        let mut out = match &self.family {
            Family::OctHerm3 => {
                return Err(Error::Unsupported(
                    "spectral decomposition in OctHerm3".into(),
                ))
            }
            Family::Spin(d) => {
                let t = x[0];
                let v = &x[1..];
                let nv = dot(v, v).sqrt();
                let dir: Vec<f64> = if nv > 0.0 {
                    v.iter().map(|c| c / nv).collect()
                } else {
                    let mut e = vec![0.0; d - 1];
                    e[0] = 1.0;
                    e
                };
                let mk = |sign: f64| {
                    let mut c = Vec::with_capacity(*d);
                    c.push(0.5);
                    c.extend(dir.iter().map(|u| 0.5 * sign * u));
                    c
                };
                vec![(t + nv, mk(1.0)), (t - nv, mk(-1.0))]
            }
            Family::DirectSum(_) => {
                let mut all = Vec::with_capacity(self.rank);
                for (s, &off) in self.summands.iter().zip(&self.offsets) {
                    for (lam, p) in s.spectral_coords(&x[off..off + s.dim])? {
                        let mut c = vec![0.0; self.dim];
                        c[off..off + s.dim].copy_from_slice(&p);
                        all.push((lam, c));
                    }
                }
                all
            }
            _ => {
                let (n, k) = self.family.matrix_shape().unwrap();
                let m = FieldMatrix::from_coords(n, k, x);
                let (vals, vecs) = m.eigh();
                vals.into_iter()
                    .zip(vecs)
                    .map(|(lam, v)| (lam, FieldMatrix::outer(&v, k).to_coords()))
                    .collect()
            }
        };
        // descending eigenvalue; exact ties fall back to the frame coordinates
        out.sort_by(|a, b| {
            b.0.total_cmp(&a.0).then_with(|| {
                for (p, q) in a.1.iter().zip(&b.1) {
                    let c = q.total_cmp(p);
                    if c != std::cmp::Ordering::Equal {
                        return c;
                    }
                }
                std::cmp::Ordering::Equal
            })
        });
        Ok(out)
    }
}

impl Algebra {
    /// `(n, k)` for the matrix families: order and real dimension of the field.
    pub fn matrix_shape(&self) -> Option<(usize, usize)> {
        self.family.matrix_shape()
    }

    /// Order of the complex matrix representing elements, for `RealSym`,
    /// `ComplexHerm` and direct sums of those (block-diagonal).
    pub fn cmat_order(&self) -> Option<usize> {
        match &self.family {
            Family::RealSym(n) | Family::ComplexHerm(n) => Some(*n),
            Family::DirectSum(_) => self.summands.iter().map(|s| s.cmat_order()).sum(),
            _ => None,
        }
    }

    /// Coordinates of the Hermitian part of `m`. For `RealSym` the imaginary
    /// part is dropped; for direct sums only the diagonal blocks are read.
    pub fn coords_from_cmat(&self, m: &CMat) -> Result<Vec<f64>> {
        let order = self
            .cmat_order()
            .ok_or_else(|| Error::Unsupported(format!("matrix view of {}", self.family)))?;
        if m.nrows() != order || m.ncols() != order {
            return Err(Error::DimensionMismatch {
                expected: order,
                actual: m.nrows(),
            });
        }
        Ok(match &self.family {
            Family::RealSym(n) | Family::ComplexHerm(n) => {
                let k = if matches!(self.family, Family::RealSym(_)) { 1 } else { 2 };
                FieldMatrix::from_fn(*n, k, |i, j| {
                    let z = m[(i, j)];
                    let mut h = Hc::ZERO;
                    h.0[0] = z.re;
                    if k == 2 {
                        h.0[1] = z.im;
                    }
                    h
                })
                .to_coords()
            }
            _ => {
                let mut out = Vec::with_capacity(self.dim);
                let mut at = 0;
                for s in &self.summands {
                    let o = s.cmat_order().unwrap();
                    let block = m.view((at, at), (o, o)).into_owned();
                    out.extend(s.coords_from_cmat(&block)?);
                    at += o;
                }
                out
            }
        })
    }

    pub fn cmat_from_coords(&self, x: &[f64]) -> Result<CMat> {
        let order = self
            .cmat_order()
            .ok_or_else(|| Error::Unsupported(format!("matrix view of {}", self.family)))?;
        Ok(match &self.family {
            Family::RealSym(n) | Family::ComplexHerm(n) => {
                let k = if matches!(self.family, Family::RealSym(_)) { 1 } else { 2 };
                let fm = FieldMatrix::from_coords(*n, k, x);
                CMat::from_fn(*n, *n, |i, j| {
                    let h = fm.get(i, j);
                    Complex64::new(h.0[0], h.0[1])
                })
            }
            _ => {
                let mut m = CMat::zeros(order, order);
                let mut at = 0;
                for (s, &off) in self.summands.iter().zip(&self.offsets) {
                    let o = s.cmat_order().unwrap();
                    let block = s.cmat_from_coords(&x[off..off + s.dim])?;
                    m.view_mut((at, at), (o, o)).copy_from(&block);
                    at += o;
                }
                m
            }
        })
    }
}

impl Element {
    /// Build from a Hermitian (or, for `RealSym`, real symmetric) matrix.
    pub fn from_cmat(alg: &Arc<Algebra>, m: &CMat) -> Result<Element> {
        Element::new(alg, alg.coords_from_cmat(m)?)
    }

    pub fn to_cmat(&self) -> Result<CMat> {
        self.alg.cmat_from_coords(&self.coords)
    }

    pub fn to_field_matrix(&self) -> Option<FieldMatrix> {
        let (n, k) = self.alg.matrix_shape()?;
        Some(FieldMatrix::from_coords(n, k, &self.coords))
    }

    pub fn from_field_matrix(alg: &Arc<Algebra>, m: &FieldMatrix) -> Result<Element> {
        match alg.matrix_shape() {
            Some((n, k)) if n == m.n && k == m.k => Element::new(alg, m.to_coords()),
            _ => Err(Error::Unsupported(format!("{} from a field matrix", alg.family))),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || a.family == b.family
}

fn check_same(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<()> {
    if same_algebra(a, b) {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch {
            left: a.family.to_string(),
            right: b.family.to_string(),
        })
    }
}

/// A vector of an algebra in its fixed coordinates.
#[derive(Clone, Debug)]
pub struct Element {
    alg: Arc<Algebra>,
    coords: Vec<f64>,
}

impl Element {
    pub fn new(alg: &Arc<Algebra>, coords: Vec<f64>) -> Result<Element> {
        if coords.len() != alg.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.ambient_dim(),
                actual: coords.len(),
            });
        }
        Ok(Element {
            alg: alg.clone(),
            coords,
        })
    }

    pub fn zero(alg: &Arc<Algebra>) -> Element {
        Element {
            alg: alg.clone(),
            coords: vec![0.0; alg.ambient_dim()],
        }
    }

    pub fn unit(alg: &Arc<Algebra>) -> Element {
        Element {
            alg: alg.clone(),
            coords: alg.unit_coords(),
        }
    }

    /// The `i`-th coordinate basis vector.
    pub fn basis(alg: &Arc<Algebra>, i: usize) -> Element {
        let mut e = Element::zero(alg);
        e.coords[i] = 1.0;
        e
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn scale(&self, s: f64) -> Element {
        Element {
            alg: self.alg.clone(),
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        self.alg.trace_coords(&self.coords)
    }

    /// Norm induced by the trace inner product.
    pub fn norm(&self) -> f64 {
        self.alg.inner_coords(&self.coords, &self.coords).max(0.0).sqrt()
    }

    /// Largest absolute coordinate difference.
    pub fn max_diff(&self, other: &Element) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn dist(&self, other: &Element) -> f64 {
        (self - other).norm()
    }

    pub fn jordan(&self, other: &Element) -> Result<Element> {
        jordan_product(self, other)
    }

    pub fn inner(&self, other: &Element) -> Result<f64> {
        trace_inner(self, other)
    }

    pub fn square(&self) -> Element {
        Element {
            alg: self.alg.clone(),
            coords: self.alg.product_coords(&self.coords, &self.coords),
        }
    }

    pub fn spectral(&self) -> Result<SpectralDecomposition> {
        spectral_decompose(self)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let sd = self.spectral()?;
        Ok(sd.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min))
    }

    /// Functional calculus: `Σ f(λ_i) p_i`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Result<Element> {
        Ok(self.spectral()?.map(f))
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        assert!(same_algebra(&self.alg, &rhs.alg), "adding elements of different algebras");
        Element {
            alg: self.alg.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        assert!(same_algebra(&self.alg, &rhs.alg), "subtracting elements of different algebras");
        Element {
            alg: self.alg.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Element) -> bool {
        same_algebra(&self.alg, &other.alg) && self.coords == other.coords
    }
}

pub fn jordan_product(x: &Element, y: &Element) -> Result<Element> {
    check_same(&x.alg, &y.alg)?;
    Ok(Element {
        alg: x.alg.clone(),
        coords: x.alg.product_coords(&x.coords, &y.coords),
    })
}

pub fn trace_inner(x: &Element, y: &Element) -> Result<f64> {
    check_same(&x.alg, &y.alg)?;
    Ok(x.alg.inner_coords(&x.coords, &y.coords))
}

/// `P_y(z) = 2 y∘(y∘z) − y²∘z`.
pub fn quadratic_rep(y: &Element, z: &Element) -> Result<Element> {
    check_same(&y.alg, &z.alg)?;
    let yz = jordan_product(y, z)?;
    let y_yz = jordan_product(y, &yz)?;
    let y2_z = jordan_product(&y.square(), z)?;
    Ok(&y_yz.scale(2.0) - &y2_z)
}

#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Jordan frame, one primitive idempotent per eigenvalue.
    pub frame: Vec<Element>,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> Element {
        self.map(|l| l)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Element {
        let alg = self.frame[0].algebra();
        let mut acc = vec![0.0; alg.ambient_dim()];
        for (lam, p) in self.eigenvalues.iter().zip(&self.frame) {
            let s = f(*lam);
            for (a, c) in acc.iter_mut().zip(p.coords()) {
                *a += s * c;
            }
        }
        Element {
            alg: alg.clone(),
            coords: acc,
        }
    }
}

pub fn spectral_decompose(x: &Element) -> Result<SpectralDecomposition> {
    let pairs = x.alg.spectral_coords(&x.coords)?;
    let (eigenvalues, frame) = pairs
        .into_iter()
        .map(|(l, c)| {
            (
                l,
                Element {
                    alg: x.alg.clone(),
                    coords: c,
                },
            )
        })
        .unzip();
    Ok(SpectralDecomposition { eigenvalues, frame })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IdempotentClass {
    NotIdempotent,
    Idempotent,
    PrimitiveIdempotent,
}

/// Classify `x` as a (primitive) idempotent. Zero is reported as
/// `NotIdempotent` so that primitive idempotents are always nonzero.
pub fn idempotent_class(x: &Element, tol: f64) -> IdempotentClass {
    let scale = 1.0 + x.norm();
    if x.norm() <= tol * scale {
        return IdempotentClass::NotIdempotent;
    }
    if x.square().dist(x) > tol * scale {
        return IdempotentClass::NotIdempotent;
    }
    if (x.trace() - 1.0).abs() <= tol * scale {
        IdempotentClass::PrimitiveIdempotent
    } else {
        IdempotentClass::Idempotent
    }
}
