//! Model theories: classical probability, real and complex quantum theory.
//!
//! Every system is an algebra of the kernel: classical level `n` is the
//! direct sum of `n` one-dimensional algebras (the simplex cone), real
//! quantum level `n` is `RealSym(n)`, complex quantum level `n` is
//! `ComplexHerm(n)`. Composites have level `n_A · n_B` and the same family.

mod channel;
pub mod wire;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use channel::{apply_channel, is_channel, Channel};

use crate::cone::{cone_member, dagger, ConeContext, Functional};
use crate::eja::{make_algebra, quadratic_rep, Algebra, Element, Family, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{rank, CMat, Mat};
use crate::report::{CheckReport, Stopwatch, Witness};
use crate::sample;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BackendKind {
    Classical,
    RealQT,
    ComplexQT,
}

impl BackendKind {
    pub const ALL: [BackendKind; 3] = [BackendKind::Classical, BackendKind::RealQT, BackendKind::ComplexQT];

    /// Short CLI name.
    pub fn name(self) -> &'static str {
        match self {
            BackendKind::Classical => "classical",
            BackendKind::RealQT => "real",
            BackendKind::ComplexQT => "complex",
        }
    }

    pub fn theory_name(self) -> &'static str {
        match self {
            BackendKind::Classical => "Classical theory",
            BackendKind::RealQT => "Real quantum theory",
            BackendKind::ComplexQT => "Complex quantum theory",
        }
    }

    pub fn family(self, level: usize) -> Family {
        match self {
            BackendKind::Classical => Family::DirectSum(vec![Family::ComplexHerm(1); level]),
            BackendKind::RealQT => Family::RealSym(level),
            BackendKind::ComplexQT => Family::ComplexHerm(level),
        }
    }

    pub fn algebra(self, level: usize) -> Result<Arc<Algebra>> {
        if level == 0 {
            return Err(Error::InvalidParameter("system level must be at least 1".into()));
        }
        make_algebra(self.family(level))
    }
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BackendKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(BackendKind::Classical),
            "real" => Ok(BackendKind::RealQT),
            "complex" => Ok(BackendKind::ComplexQT),
            other => Err(Error::InvalidInput(format!("unknown backend `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemRef {
    pub kind: BackendKind,
    pub level: usize,
}

impl SystemRef {
    pub fn new(kind: BackendKind, level: usize) -> SystemRef {
        SystemRef { kind, level }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemInfo {
    /// Linear dimension `d` of the state space.
    pub linear_dim: usize,
    /// Informational dimension `n`.
    pub informational_dim: usize,
    pub rank: usize,
}

/// A composite `AB` together with its factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Composite {
    pub system: SystemRef,
    pub a: SystemRef,
    pub b: SystemRef,
}

/// Perfectly distinguishable states and the measurement that tells them apart.
#[derive(Clone, Debug)]
pub struct Distinguishing {
    pub n: usize,
    pub states: Vec<Element>,
    pub effects: Vec<Functional>,
}

#[derive(Clone, Debug)]
pub struct TomographyResult {
    pub composite_dim: usize,
    /// Dimension of the span of product effects on the composite.
    pub product_span_rank: usize,
    /// Distinct composite states with identical product-effect statistics.
    pub witness: Option<(Element, Element)>,
}

/// A stateless model theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TheoryBackend {
    pub kind: BackendKind,
}

impl TheoryBackend {
    pub fn new(kind: BackendKind) -> TheoryBackend {
        TheoryBackend { kind }
    }

    pub fn system(&self, level: usize) -> Result<SystemRef> {
        if level == 0 {
            return Err(Error::InvalidParameter("system level must be at least 1".into()));
        }
        Ok(SystemRef::new(self.kind, level))
    }

    pub fn algebra(&self, sys: SystemRef) -> Result<Arc<Algebra>> {
        self.check(sys)?;
        self.kind.algebra(sys.level)
    }

    fn check(&self, sys: SystemRef) -> Result<()> {
        if sys.kind != self.kind {
            return Err(Error::BackendMismatch(format!("{} system on {} backend", sys.kind, self.kind)));
        }
        Ok(())
    }

    pub fn system_info(&self, level: usize) -> Result<SystemInfo> {
        let alg = self.kind.algebra(level)?;
        Ok(SystemInfo {
            linear_dim: alg.dim(),
            informational_dim: level,
            rank: alg.rank(),
        })
    }

    pub fn compose_systems(&self, a: SystemRef, b: SystemRef) -> Result<Composite> {
        self.check(a)?;
        self.check(b)?;
        Ok(Composite {
            system: SystemRef::new(self.kind, a.level * b.level),
            a,
            b,
        })
    }

    /// Product-state embedding `x ⊗ y` (Kronecker product of matrices).
    pub fn product_state(&self, x: &Element, y: &Element) -> Result<Element> {
        let xm = x.to_cmat()?;
        let ym = y.to_cmat()?;
        let alg = self.kind.algebra(xm.nrows() * ym.nrows())?;
        Element::from_cmat(&alg, &xm.kronecker(&ym))
    }

    pub fn dimension_identity_check(&self, a: SystemRef, b: SystemRef) -> Result<CheckReport> {
        let start = Stopwatch::start();
        let comp = self.compose_systems(a, b)?;
        let da = self.system_info(a.level)?.linear_dim;
        let db = self.system_info(b.level)?.linear_dim;
        let ab = self.system_info(comp.system.level)?;
        let mut rep = CheckReport::new("dimension_identity");
        rep.backend = Some(self.kind.name().into());
        rep.levels = vec![a.level, b.level];
        rep.samples = 1;
        rep.notes.push(format!("d_AB = {}, d_A d_B = {}", ab.linear_dim, da * db));
        rep.notes.push(format!(
            "n_AB = {}, n_A n_B = {}",
            ab.informational_dim,
            a.level * b.level
        ));
        if ab.linear_dim != da * db {
            rep.notes.push(format!("deficit {}", ab.linear_dim as i64 - (da * db) as i64));
            rep.fail([Witness::values("d_AB, d_A*d_B", vec![ab.linear_dim as f64, (da * db) as f64])]);
        }
        if ab.informational_dim != a.level * b.level {
            rep.fail([Witness::values(
                "n_AB, n_A*n_B",
                vec![ab.informational_dim as f64, (a.level * b.level) as f64],
            )]);
        }
        rep.runtime_ms = start.elapsed_ms();
        Ok(rep)
    }

    /// Search for distinct composite states that no product effect tells
    /// apart. Exists iff product effects fail to span the composite dual.
    pub fn product_tomography_witness(&self, a: SystemRef, b: SystemRef) -> Result<TomographyResult> {
        let comp = self.compose_systems(a, b)?;
        let alg_a = self.algebra(a)?;
        let alg_b = self.algebra(b)?;
        let alg_ab = self.algebra(comp.system)?;
        let products = self.product_basis(&alg_a, &alg_b)?;
        let rows = products.len();
        let m = Mat::from_fn(rows, alg_ab.dim(), |r, c| products[r].coords()[c]);
        let span = rank(&m, 1e-9);
        let mut result = TomographyResult {
            composite_dim: alg_ab.dim(),
            product_span_rank: span,
            witness: None,
        };
        if span == alg_ab.dim() {
            return Ok(result);
        }
        if self.kind != BackendKind::RealQT {
            return Err(Error::Unsupported(format!("tomography witness for {}", self.kind)));
        }
        // ρ± = (I ⊗ I ± Y ⊗ Y) / (n_A n_B) with Y = E_12 − E_21 on each factor
        let y = |n: usize| {
            let mut m = CMat::zeros(n, n);
            m[(0, 1)] = Complex64::new(1.0, 0.0);
            m[(1, 0)] = Complex64::new(-1.0, 0.0);
            m
        };
        let yy = y(a.level).kronecker(&y(b.level));
        let id = CMat::identity(comp.system.level, comp.system.level);
        let norm = Complex64::new(1.0 / comp.system.level as f64, 0.0);
        let plus = Element::from_cmat(&alg_ab, &((&id + &yy) * norm))?;
        let minus = Element::from_cmat(&alg_ab, &((&id - &yy) * norm))?;

        let ctx = ConeContext::with_default_tol(&alg_ab);
        let agree = products.iter().all(|p| {
            let e = dagger(p);
            (e.eval(&plus).unwrap() - e.eval(&minus).unwrap()).abs() < 1e-12
        });
        if plus.dist(&minus) > 1e-9 && cone_member(&ctx, &plus)? && cone_member(&ctx, &minus)? && agree {
            result.witness = Some((plus, minus));
        }
        Ok(result)
    }

    /// `x_i ⊗ y_j` over the coordinate bases of both factors.
    pub fn product_basis(&self, alg_a: &Arc<Algebra>, alg_b: &Arc<Algebra>) -> Result<Vec<Element>> {
        let mut out = Vec::with_capacity(alg_a.dim() * alg_b.dim());
        for i in 0..alg_a.dim() {
            for j in 0..alg_b.dim() {
                out.push(self.product_state(&Element::basis(alg_a, i), &Element::basis(alg_b, j))?);
            }
        }
        Ok(out)
    }

    /// Diagonal Jordan frame with its dagger effects, verified `a_i(ρ_j) = δ_ij`.
    pub fn informational_dimension(&self, a: SystemRef) -> Result<Distinguishing> {
        let alg = self.algebra(a)?;
        let n = a.level;
        let states: Vec<Element> = (0..n)
            .map(|i| {
                let mut m = CMat::zeros(n, n);
                m[(i, i)] = Complex64::new(1.0, 0.0);
                Element::from_cmat(&alg, &m)
            })
            .collect::<Result<_>>()?;
        let effects: Vec<Functional> = states.iter().map(dagger).collect();
        for (i, e) in effects.iter().enumerate() {
            for (j, s) in states.iter().enumerate() {
                let v = e.eval(s)?;
                let expect = if i == j { 1.0 } else { 0.0 };
                if (v - expect).abs() > DEFAULT_TOL {
                    return Err(Error::InvalidInput("frame is not perfectly distinguishable".into()));
                }
            }
        }
        Ok(Distinguishing { n, states, effects })
    }
}

/// `{a_i}` is a measurement: every `a_i` satisfies `0 ≤ a_i ≤ u` and the
/// effects sum to the unit (whose dagger is the deterministic effect).
pub fn is_measurement(alg: &Arc<Algebra>, effects: &[Element], tol: f64) -> Result<bool> {
    let ctx = ConeContext::new(alg, tol)?;
    let u = Element::unit(alg);
    let mut sum = Element::zero(alg);
    for a in effects {
        if !cone_member(&ctx, a)? || !cone_member(&ctx, &(&u - a))? {
            return Ok(false);
        }
        sum = &sum + a;
    }
    Ok(sum.dist(&u) <= tol * (1.0 + u.norm()))
}

/// Random `m`-outcome resolution of the unit: `a_i = P_{S^{-1/2}}(x_i)` with
/// `S = Σ x_i` for random cone elements `x_i`.
pub fn random_resolution<R: Rng + ?Sized>(alg: &Arc<Algebra>, m: usize, rng: &mut R) -> Result<Vec<Element>> {
    let xs: Vec<Element> = (0..m).map(|_| sample::cone_element(alg, rng)).collect();
    let mut s = Element::zero(alg);
    for x in &xs {
        s = &s + x;
    }
    let s_inv_sqrt = s.map_spectrum(|l| 1.0 / l.sqrt())?;
    xs.iter().map(|x| quadratic_rep(&s_inv_sqrt, x)).collect()
}
