//! Hermitian matrices over R, C, H and O, stored entry-wise as Cayley–Dickson
//! numbers.
//!
//! Coordinate convention for `Herm_n(F)` with `k = dim_R F`: the `n` diagonal
//! entries first, then for every pair `i < j` in row-major order the `k` real
//! components of `x_ij` scaled by `√2`. In these coordinates the trace inner
//! product `tr(x ∘ y)` is the Euclidean dot product.

use crate::field::{left_mul_matrix, Hc};
use crate::linalg::{jacobi_eigh, Mat};

#[derive(Clone, Debug, PartialEq)]
pub struct FieldMatrix {
    pub n: usize,
    pub k: usize,
    pub data: Vec<Hc>,
}

impl FieldMatrix {
    pub fn zeros(n: usize, k: usize) -> Self {
        FieldMatrix {
            n,
            k,
            data: vec![Hc::ZERO; n * n],
        }
    }

    pub fn from_fn(n: usize, k: usize, f: impl Fn(usize, usize) -> Hc) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        FieldMatrix { n, k, data }
    }

    pub fn get(&self, i: usize, j: usize) -> Hc {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Hc) {
        self.data[i * self.n + j] = v;
    }

    pub fn coord_len(n: usize, k: usize) -> usize {
        n + k * n * (n - 1) / 2
    }

    pub fn from_coords(n: usize, k: usize, coords: &[f64]) -> Self {
        let mut m = FieldMatrix::zeros(n, k);
        for i in 0..n {
            m.set(i, i, Hc::real(coords[i]));
        }
        let mut idx = n;
        for i in 0..n {
            for j in (i + 1)..n {
                let mut h = Hc::ZERO;
                for t in 0..k {
                    h.0[t] = coords[idx + t] / std::f64::consts::SQRT_2;
                }
                idx += k;
                m.set(i, j, h);
                m.set(j, i, h.conj());
            }
        }
        m
    }

    /// Coordinates of the Hermitian part; the matrix is assumed Hermitian.
    pub fn to_coords(&self) -> Vec<f64> {
        let (n, k) = (self.n, self.k);
        let mut out = Vec::with_capacity(Self::coord_len(n, k));
        for i in 0..n {
            out.push(self.get(i, i).re());
        }
        for i in 0..n {
            for j in (i + 1)..n {
                // average with the mirrored entry to absorb rounding asymmetry
                let h = (self.get(i, j) + self.get(j, i).conj()).scale(0.5);
                for t in 0..k {
                    out.push(h.0[t] * std::f64::consts::SQRT_2);
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        let (n, k) = (self.n, self.k);
        let mut out = FieldMatrix::zeros(n, k);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Hc::ZERO;
                for l in 0..n {
                    acc += self.get(i, l).mul(&other.get(l, j), k);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Symmetrised product `(XY + YX) / 2`.
    pub fn jordan(&self, other: &FieldMatrix) -> FieldMatrix {
        let xy = self.mul(other);
        let yx = other.mul(self);
        FieldMatrix {
            n: self.n,
            k: self.k,
            data: xy
                .data
                .iter()
                .zip(yx.data.iter())
                .map(|(a, b)| (*a + *b).scale(0.5))
                .collect(),
        }
    }

    /// `v v†` for a column vector over the field.
    pub fn outer(v: &[Hc], k: usize) -> FieldMatrix {
        let n = v.len();
        FieldMatrix::from_fn(n, k, |i, j| v[i].mul(&v[j].conj(), k))
    }

    /// Real symmetric `nk × nk` matrix of left multiplication; only valid for
    /// associative fields (`k ≤ 4`).
    pub fn real_embedding(&self) -> Mat {
        let (n, k) = (self.n, self.k);
        let mut m = Mat::zeros(n * k, n * k);
        for i in 0..n {
            for j in 0..n {
                let block = left_mul_matrix(&self.get(i, j), k);
                for a in 0..k {
                    for b in 0..k {
                        m[(i * k + a, j * k + b)] = block[a * k + b];
                    }
                }
            }
        }
        m
    }

    /// Eigenvalues (descending) and unit eigenvectors over the field.
    ///
    /// Each field eigenvalue appears `k` times in the real embedding. Real
    /// eigenvalues are grouped into clusters and every cluster of size `c·k`
    /// yields `c` field vectors, chosen greedily by largest residual after
    /// field Gram–Schmidt against the vectors already accepted.
    pub fn eigh(&self) -> (Vec<f64>, Vec<Vec<Hc>>) {
        let (n, k) = (self.n, self.k);
        assert!(k <= 4, "eigh needs an associative field");
        let emb = self.real_embedding();
        let eig = jacobi_eigh(&emb);
        let scale = eig.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let columns: Vec<Vec<Hc>> = (0..n * k)
            .map(|c| {
                (0..n)
                    .map(|i| {
                        let mut h = Hc::ZERO;
                        for t in 0..k {
                            h.0[t] = eig.vectors[(i * k + t, c)];
                        }
                        h
                    })
                    .collect()
            })
            .collect();

        let mut accepted: Vec<Vec<Hc>> = Vec::with_capacity(n);
        let mut start = 0;
        while start < n * k {
            let mut end = start + 1;
            while end < n * k && (eig.values[end - 1] - eig.values[end]).abs() <= 1e-9 * scale {
                end += 1;
            }
            let want = ((end - start) as f64 / k as f64).round() as usize;
            let mut pool: Vec<&Vec<Hc>> = columns[start..end].iter().collect();
            for _ in 0..want {
                if accepted.len() == n {
                    break;
                }
                let mut best: Option<(f64, usize, Vec<Hc>)> = None;
                for (pi, col) in pool.iter().enumerate() {
                    let r = orthogonalize(col, &accepted, k);
                    let nr = vnorm(&r);
                    if best.as_ref().is_none_or(|b| nr > b.0) {
                        best = Some((nr, pi, r));
                    }
                }
                let (nr, pi, r) = best.expect("non-empty eigen cluster");
                pool.remove(pi);
                let v: Vec<Hc> = r.iter().map(|h| h.scale(1.0 / nr)).collect();
                accepted.push(fix_phase(v, k));
            }
            start = end;
        }

        let values: Vec<f64> = accepted.iter().map(|v| self.rayleigh(v)).collect();
        let mut order: Vec<usize> = (0..accepted.len()).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        (
            order.iter().map(|&i| values[i]).collect(),
            order.into_iter().map(|i| accepted[i].clone()).collect(),
        )
    }

    fn rayleigh(&self, v: &[Hc]) -> f64 {
        let k = self.k;
        let mut acc = 0.0;
        for i in 0..self.n {
            let mut row = Hc::ZERO;
            for j in 0..self.n {
                row += self.get(i, j).mul(&v[j], k);
            }
            acc += v[i].conj().mul(&row, k).re();
        }
        acc
    }
}

pub(crate) fn vnorm(v: &[Hc]) -> f64 {
    v.iter().map(|h| h.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨a, u⟩ = Σ ā_i u_i` over the field.
pub(crate) fn finner(a: &[Hc], u: &[Hc], k: usize) -> Hc {
    let mut acc = Hc::ZERO;
    for (x, y) in a.iter().zip(u) {
        acc += x.conj().mul(y, k);
    }
    acc
}

pub(crate) fn orthogonalize(v: &[Hc], basis: &[Vec<Hc>], k: usize) -> Vec<Hc> {
    let mut r = v.to_vec();
    // two passes for numerical safety
    for _ in 0..2 {
        for a in basis {
            let c = finner(a, &r, k);
            for (ri, ai) in r.iter_mut().zip(a) {
                *ri = *ri - ai.mul(&c, k);
            }
        }
    }
    r
}

/// Right-multiply by a unit scalar so the first non-negligible entry is real
/// and positive.
fn fix_phase(v: Vec<Hc>, k: usize) -> Vec<Hc> {
    if let Some(lead) = v.iter().find(|h| h.norm_sqr().sqrt() > 1e-9) {
        let ph = lead.conj().scale(1.0 / lead.norm_sqr().sqrt());
        v.iter().map(|h| h.mul(&ph, k)).collect()
    } else {
        v
    }
}

/// Orthonormal basis of `F^n` whose first vector is `v / |v|`, completed by
/// Gram–Schmidt over the standard basis.
pub fn complete_basis(v: &[Hc], k: usize) -> Vec<Vec<Hc>> {
    let n = v.len();
    let mut basis: Vec<Vec<Hc>> = Vec::with_capacity(n);
    let mut candidates = vec![v.to_vec()];
    for i in 0..n {
        let mut e = vec![Hc::ZERO; n];
        e[i] = Hc::real(1.0);
        candidates.push(e);
    }
    for c in candidates {
        if basis.len() == n {
            break;
        }
        let r = orthogonalize(&c, &basis, k);
        let nr = vnorm(&r);
        if nr > 1e-6 {
            basis.push(r.iter().map(|h| h.scale(1.0 / nr)).collect());
        }
    }
    basis
}

impl FieldMatrix {
    pub fn adjoint(&self) -> FieldMatrix {
        FieldMatrix::from_fn(self.n, self.k, |i, j| self.get(j, i).conj())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Hc>], k: usize) -> FieldMatrix {
        let n = cols.len();
        FieldMatrix::from_fn(n, k, |i, j| cols[j][i])
    }
}
