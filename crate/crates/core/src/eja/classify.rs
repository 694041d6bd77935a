//! Simplicity test by ideal closure and the rank/dimension lookup of simple
//! algebras.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Algebra, Element, Family};

/// Outcome of [`is_simple`]: the ideal generated by a primitive idempotent.
#[derive(Clone, Debug)]
pub struct SimplicityReport {
    pub simple: bool,
    pub ideal_dim: usize,
    /// Orthonormal (in coordinates) basis of the generated ideal.
    pub ideal_basis: Vec<Element>,
}

fn primitive_idempotent_coords(alg: &Algebra) -> Vec<f64> {
    match alg.family() {
        Family::Spin(d) => {
            let mut c = vec![0.0; *d];
            c[0] = 0.5;
            c[1] = 0.5;
            c
        }
        Family::DirectSum(_) => {
            let first = &alg.summands()[0];
            let mut c = primitive_idempotent_coords(first);
            c.resize(alg.dim(), 0.0);
            c
        }
        _ => {
            // E_11
            let mut c = vec![0.0; alg.dim()];
            c[0] = 1.0;
            c
        }
    }
}

/// Decide simplicity by closing the span of a primitive idempotent under
/// multiplication by the coordinate basis. The algebra is simple iff the
/// closure is the whole space; otherwise the closure is a proper ideal.
pub fn is_simple(alg: &Arc<Algebra>) -> SimplicityReport {
    let n = alg.dim();
    let seed = primitive_idempotent_coords(alg);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut queue = vec![seed];
    while let Some(v) = queue.pop() {
        let r = residual(&v, &basis);
        let nr = norm(&r);
        if nr <= 1e-9 * (1.0 + norm(&v)) {
            continue;
        }
        let r: Vec<f64> = r.iter().map(|c| c / nr).collect();
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            queue.push(alg.product_coords(&e, &r));
        }
        basis.push(r);
        if basis.len() == n {
            break;
        }
    }
    let ideal_dim = basis.len();
    SimplicityReport {
        simple: ideal_dim == n,
        ideal_dim,
        ideal_basis: basis
            .into_iter()
            .map(|c| Element::new(alg, c).expect("coordinate length"))
            .collect(),
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn residual(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let c: f64 = b.iter().zip(&r).map(|(x, y)| x * y).sum();
            r.iter_mut().zip(b).for_each(|(ri, bi)| *ri -= c * bi);
        }
    }
    r
}

/// Tag for a simple family in lookups and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SimpleKind {
    RealSym,
    ComplexHerm,
    QuatHerm,
    Spin,
    OctHerm3,
}

/// Dimensions of `Herm_r(R)`, `Herm_r(C)`, `Herm_r(H)`.
pub fn matrix_family_dims(r: usize) -> [usize; 3] {
    [r * (r + 1) / 2, r * r, r * (2 * r - 1)]
}

/// All simple families with the given rank and dimension. Spin factors are
/// listed only for `d ≥ 5, d ≠ 6`, and `Herm_3(O)` only at `(3, 27)`; the
/// remaining low-dimensional coincidences are represented by their matrix
/// forms.
pub fn classify_simple(rank: usize, dim: usize) -> Vec<Family> {
    let mut out = Vec::new();
    if rank == 0 || dim == 0 {
        return out;
    }
    let [ds, dc, dq] = matrix_family_dims(rank);
    if dim == ds {
        out.push(Family::RealSym(rank));
    }
    if dim == dc {
        out.push(Family::ComplexHerm(rank));
    }
    if dim == dq {
        out.push(Family::QuatHerm(rank));
    }
    if rank == 2 && dim >= 5 && dim != 6 {
        out.push(Family::Spin(dim));
    }
    if rank == 3 && dim == 27 {
        out.push(Family::OctHerm3);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eja::make_algebra;

    #[test]
    fn simple_families() {
        for f in [
            Family::ComplexHerm(2),
            Family::Spin(5),
            Family::RealSym(3),
            Family::QuatHerm(2),
            Family::OctHerm3,
        ] {
            let a = make_algebra(f.clone()).unwrap();
            let rep = is_simple(&a);
            assert!(rep.simple, "{f} should be simple");
            assert_eq!(rep.ideal_dim, a.dim());
        }
    }

    #[test]
    fn direct_sum_has_block_ideal() {
        let a = make_algebra(Family::DirectSum(vec![Family::ComplexHerm(1), Family::ComplexHerm(1)])).unwrap();
        let rep = is_simple(&a);
        assert!(!rep.simple);
        assert_eq!(rep.ideal_dim, 1);
        assert!((rep.ideal_basis[0].coords()[0].abs() - 1.0).abs() < 1e-12);
        assert!(rep.ideal_basis[0].coords()[1].abs() < 1e-12);

        let b = make_algebra(Family::DirectSum(vec![Family::Spin(5), Family::RealSym(2)])).unwrap();
        let rep = is_simple(&b);
        assert!(!rep.simple);
        assert_eq!(rep.ideal_dim, 5);
    }

    #[test]
    fn spin_two_is_not_simple() {
        // Spin(2) ≅ R ⊕ R
        let a = make_algebra(Family::Spin(2)).unwrap();
        assert!(!is_simple(&a).simple);
    }

    #[test]
    fn lookups() {
        assert!(classify_simple(9, 729).is_empty());
        assert_eq!(classify_simple(4, 16), vec![Family::ComplexHerm(4)]);
        assert_eq!(classify_simple(2, 25), vec![Family::Spin(25)]);
        assert_eq!(classify_simple(2, 6), vec![Family::QuatHerm(2)]);
        assert_eq!(classify_simple(3, 27), vec![Family::OctHerm3]);
        assert_eq!(matrix_family_dims(9), [45, 81, 153]);
        assert_eq!(matrix_family_dims(4), [10, 16, 28]);
    }
}
