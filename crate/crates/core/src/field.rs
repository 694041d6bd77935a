//! Cayley–Dickson numbers: reals (k = 1), complexes (2), quaternions (4) and
//! octonions (8) stored in one fixed-width value.
//!
//! Elements with only the first `k` components nonzero form a subalgebra, so a
//! single multiplication routine serves every field. The dimension is passed
//! explicitly to skip work on the unused tail.

use std::ops::{Add, AddAssign, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Hc(pub [f64; 8]);

impl Hc {
    pub const ZERO: Hc = Hc([0.0; 8]);

    pub fn real(x: f64) -> Self {
        let mut c = [0.0; 8];
        c[0] = x;
        Hc(c)
    }

    pub fn unit(i: usize) -> Self {
        let mut c = [0.0; 8];
        c[i] = 1.0;
        Hc(c)
    }

    pub fn re(&self) -> f64 {
        self.0[0]
    }

    pub fn conj(&self) -> Self {
        let mut c = self.0;
        for v in c.iter_mut().skip(1) {
            *v = -*v;
        }
        Hc(c)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut c = self.0;
        for v in c.iter_mut() {
            *v *= s;
        }
        Hc(c)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    /// Product in the `k`-dimensional Cayley–Dickson algebra.
    pub fn mul(&self, other: &Hc, k: usize) -> Hc {
        let mut out = [0.0; 8];
        cd_mul(&self.0[..k], &other.0[..k], &mut out[..k]);
        Hc(out)
    }
}

impl Add for Hc {
    type Output = Hc;
    fn add(self, rhs: Hc) -> Hc {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(rhs.0.iter()) {
            *a += b;
        }
        Hc(c)
    }
}

impl AddAssign for Hc {
    fn add_assign(&mut self, rhs: Hc) {
        for (a, b) in self.0.iter_mut().zip(rhs.0.iter()) {
            *a += b;
        }
    }
}

impl Sub for Hc {
    type Output = Hc;
    fn sub(self, rhs: Hc) -> Hc {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(rhs.0.iter()) {
            *a -= b;
        }
        Hc(c)
    }
}

impl Neg for Hc {
    type Output = Hc;
    fn neg(self) -> Hc {
        self.scale(-1.0)
    }
}

// (p, q)(r, s) = (pr − s̄q, sp + qr̄)
fn cd_mul(a: &[f64], b: &[f64], out: &mut [f64]) {
    let k = a.len();
    if k == 1 {
        out[0] = a[0] * b[0];
        return;
    }
    let h = k / 2;
    let (p, q) = a.split_at(h);
    let (r, s) = b.split_at(h);
    let mut s_bar = [0.0; 4];
    let mut r_bar = [0.0; 4];
    s_bar[..h].copy_from_slice(s);
    r_bar[..h].copy_from_slice(r);
    for i in 1..h {
        s_bar[i] = -s_bar[i];
        r_bar[i] = -r_bar[i];
    }
    let mut t1 = [0.0; 4];
    let mut t2 = [0.0; 4];
    cd_mul(p, r, &mut t1[..h]);
    cd_mul(&s_bar[..h], q, &mut t2[..h]);
    for i in 0..h {
        out[i] = t1[i] - t2[i];
    }
    cd_mul(s, p, &mut t1[..h]);
    cd_mul(q, &r_bar[..h], &mut t2[..h]);
    for i in 0..h {
        out[h + i] = t1[i] + t2[i];
    }
}

/// Real `k × k` matrix of left multiplication by `q`.
pub fn left_mul_matrix(q: &Hc, k: usize) -> Vec<f64> {
    let mut m = vec![0.0; k * k];
    for j in 0..k {
        let col = q.mul(&Hc::unit(j), k);
        for i in 0..k {
            m[i * k + j] = col.0[i];
        }
    }
    m
}
