//! Seeded random generators for elements, states and automorphisms.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cone::LinearMap;
use crate::eja::matrix::{orthogonalize, vnorm, FieldMatrix};
use crate::eja::{Algebra, Element, Family};
use crate::error::{Error, Result};
use crate::field::Hc;
use crate::linalg::{CMat, Mat};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gaussian_element<R: Rng + ?Sized>(alg: &Arc<Algebra>, rng: &mut R) -> Element {
    let c = (0..alg.ambient_dim()).map(|_| gaussian(rng)).collect();
    Element::new(alg, c).expect("coordinate length")
}

/// `a ∘ a` for Gaussian `a`; always in the positive cone.
pub fn cone_element<R: Rng + ?Sized>(alg: &Arc<Algebra>, rng: &mut R) -> Element {
    gaussian_element(alg, rng).square()
}

/// Normalized cone element.
pub fn random_state<R: Rng + ?Sized>(alg: &Arc<Algebra>, rng: &mut R) -> Element {
    let x = cone_element(alg, rng);
    let t = x.trace();
    x.scale(1.0 / t)
}

/// Normalized state with minimum eigenvalue at least `w / rank` for a random
/// mixing weight `w ∈ [0.05, 0.95]`.
pub fn random_internal_state<R: Rng + ?Sized>(alg: &Arc<Algebra>, rng: &mut R) -> Element {
    let w: f64 = rng.random_range(0.05..0.95);
    let chi = Element::unit(alg).scale(1.0 / alg.rank() as f64);
    &random_state(alg, rng).scale(1.0 - w) + &chi.scale(w)
}

/// Haar-like random unitary (QR of a complex Gaussian matrix via
/// Gram–Schmidt).
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let fm = random_field_unitary(n, 2, rng);
    CMat::from_fn(n, n, |i, j| {
        let h = fm.get(i, j);
        Complex64::new(h.0[0], h.0[1])
    })
}

pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    let fm = random_field_unitary(n, 1, rng);
    Mat::from_fn(n, n, |i, j| fm.get(i, j).re())
}

/// Unitary over R, C or H (`k ∈ {1, 2, 4}`).
pub fn random_field_unitary<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> FieldMatrix {
    let mut cols: Vec<Vec<Hc>> = Vec::with_capacity(n);
    while cols.len() < n {
        let v: Vec<Hc> = (0..n)
            .map(|_| {
                let mut h = Hc::ZERO;
                for t in 0..k {
                    h.0[t] = gaussian(rng);
                }
                h
            })
            .collect();
        let r = orthogonalize(&v, &cols, k);
        let nr = vnorm(&r);
        if nr > 1e-6 {
            cols.push(r.iter().map(|h| h.scale(1.0 / nr)).collect());
        }
    }
    FieldMatrix::from_columns(&cols, k)
}

/// Random Jordan-algebra automorphism: unitary conjugation for the
/// associative matrix families, a rotation of the vector part for spin
/// factors, block-wise for direct sums.
pub fn random_automorphism<R: Rng + ?Sized>(alg: &Arc<Algebra>, rng: &mut R) -> Result<LinearMap> {
    match alg.family() {
        Family::RealSym(n) | Family::ComplexHerm(n) | Family::QuatHerm(n) => {
            let (_, k) = alg.matrix_shape().unwrap();
            let u = random_field_unitary(*n, k, rng);
            let ua = u.adjoint();
            LinearMap::from_fn(alg, alg, |x| {
                let m = x.to_field_matrix().unwrap();
                Element::from_field_matrix(alg, &u.mul(&m).mul(&ua))
            })
        }
        Family::Spin(d) => {
            let q = random_orthogonal(d - 1, rng);
            let mut m = Mat::zeros(*d, *d);
            m[(0, 0)] = 1.0;
            m.view_mut((1, 1), (d - 1, d - 1)).copy_from(&q);
            LinearMap::new(alg, alg, m)
        }
        Family::DirectSum(_) => {
            let n = alg.ambient_dim();
            let mut m = Mat::zeros(n, n);
            for (s, &off) in alg.summands().iter().zip(alg.offsets()) {
                let part = random_automorphism(s, rng)?;
                m.view_mut((off, off), (s.dim(), s.dim())).copy_from(part.matrix());
            }
            LinearMap::new(alg, alg, m)
        }
        Family::OctHerm3 => Err(Error::Unsupported("random automorphisms of OctHerm3".into())),
    }
}
