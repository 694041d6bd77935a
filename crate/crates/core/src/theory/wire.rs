//! Process spaces: the real coordinate spaces on which transformations act.
//!
//! A single system of level `n` has an orthonormal operator basis `B_c`:
//! diagonal units for classical systems, all real matrix units `E_ij` for
//! real quantum systems (antisymmetric directions included, so that
//! `f ⊗ id` is well defined), and the Hermitian basis matching the
//! `ComplexHerm(n)` coordinates for complex quantum systems. A list of systems
//! uses Kronecker products of single-system basis elements with the first
//! factor most significant, so parallel composition of maps is the plain
//! Kronecker product of their matrices.

use num_complex::Complex64;

use super::BackendKind;
use crate::eja::matrix::FieldMatrix;
use crate::linalg::CMat;

impl BackendKind {
    pub fn wire_dim(self, level: usize) -> usize {
        match self {
            BackendKind::Classical => level,
            BackendKind::RealQT | BackendKind::ComplexQT => level * level,
        }
    }

    pub fn wire_dim_of(self, levels: &[usize]) -> usize {
        levels.iter().map(|&n| self.wire_dim(n)).product()
    }

    /// The `c`-th orthonormal basis operator of a level-`n` system.
    pub fn wire_basis(self, n: usize, c: usize) -> CMat {
        match self {
            BackendKind::Classical => {
                let mut m = CMat::zeros(n, n);
                m[(c, c)] = Complex64::new(1.0, 0.0);
                m
            }
            BackendKind::RealQT => {
                let mut m = CMat::zeros(n, n);
                m[(c / n, c % n)] = Complex64::new(1.0, 0.0);
                m
            }
            BackendKind::ComplexQT => {
                let mut coords = vec![0.0; n * n];
                coords[c] = 1.0;
                let fm = FieldMatrix::from_coords(n, 2, &coords);
                CMat::from_fn(n, n, |i, j| {
                    let h = fm.get(i, j);
                    Complex64::new(h.0[0], h.0[1])
                })
            }
        }
    }

    /// Per-system lists of basis operators.
    fn bases(self, levels: &[usize]) -> Vec<Vec<CMat>> {
        levels
            .iter()
            .map(|&n| (0..self.wire_dim(n)).map(|c| self.wire_basis(n, c)).collect())
            .collect()
    }

    /// Complex coordinates `z_c = tr(B_c† X)` of an operator on the
    /// composite of `levels`.
    pub fn operator_to_wire_complex(self, levels: &[usize], x: &CMat) -> Vec<Complex64> {
        let bases = self.bases(levels);
        let total = self.wire_dim_of(levels);
        let mut out = Vec::with_capacity(total);
        for c in 0..total {
            let b = kron_basis(&bases, levels, c, self);
            let mut acc = Complex64::new(0.0, 0.0);
            for (bi, xi) in b.iter().zip(x.iter()) {
                acc += bi.conj() * xi;
            }
            out.push(acc);
        }
        out
    }

    /// Real coordinates of an operator lying in the real span of the basis.
    pub fn operator_to_wire(self, levels: &[usize], x: &CMat) -> Vec<f64> {
        self.operator_to_wire_complex(levels, x)
            .into_iter()
            .map(|z| z.re)
            .collect()
    }

    pub fn wire_to_operator_complex(self, levels: &[usize], coords: &[Complex64]) -> CMat {
        let bases = self.bases(levels);
        let order: usize = levels.iter().product();
        let mut out = CMat::zeros(order, order);
        for (c, z) in coords.iter().enumerate() {
            if *z == Complex64::new(0.0, 0.0) {
                continue;
            }
            out += kron_basis(&bases, levels, c, self) * *z;
        }
        out
    }

    pub fn wire_to_operator(self, levels: &[usize], coords: &[f64]) -> CMat {
        let z: Vec<Complex64> = coords.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        self.wire_to_operator_complex(levels, &z)
    }
}

fn kron_basis(bases: &[Vec<CMat>], levels: &[usize], mut c: usize, kind: BackendKind) -> CMat {
    let mut idx = vec![0; levels.len()];
    for s in (0..levels.len()).rev() {
        let d = kind.wire_dim(levels[s]);
        idx[s] = c % d;
        c /= d;
    }
    let mut m = CMat::from_element(1, 1, Complex64::new(1.0, 0.0));
    for (s, &i) in idx.iter().enumerate() {
        m = m.kronecker(&bases[s][i]);
    }
    m
}
