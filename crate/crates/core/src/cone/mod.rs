//! Positive-cone predicates, the dagger identification of effects with cone
//! elements, self-duality sampling and the homogeneity automorphism.

mod linear_map;

use std::sync::Arc;

pub use linear_map::LinearMap;

use crate::eja::matrix::{complete_basis, FieldMatrix};
use crate::eja::{quadratic_rep, same_algebra, Algebra, Element, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::field::Hc;
use crate::report::{CheckReport, Stopwatch, Witness};
use crate::sample;

#[derive(Clone, Debug)]
pub struct ConeContext {
    algebra: Arc<Algebra>,
    tol: f64,
}

impl ConeContext {
    pub fn new(algebra: &Arc<Algebra>, tol: f64) -> Result<ConeContext> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance {tol}")));
        }
        Ok(ConeContext {
            algebra: algebra.clone(),
            tol,
        })
    }

    pub fn with_default_tol(algebra: &Arc<Algebra>) -> ConeContext {
        ConeContext {
            algebra: algebra.clone(),
            tol: DEFAULT_TOL,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    fn check(&self, x: &Element) -> Result<()> {
        if same_algebra(x.algebra(), &self.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch {
                left: x.algebra().family().to_string(),
                right: self.algebra.family().to_string(),
            })
        }
    }
}

/// `x ∈ E⁺` iff its smallest eigenvalue is at least `−tol·(1 + |x|)`.
pub fn cone_member(ctx: &ConeContext, x: &Element) -> Result<bool> {
    ctx.check(x)?;
    Ok(x.min_eigenvalue()? >= -ctx.tol * (1.0 + x.norm()))
}

/// `x ≤ y` in the cone order.
pub fn order_leq(ctx: &ConeContext, x: &Element, y: &Element) -> Result<bool> {
    ctx.check(x)?;
    ctx.check(y)?;
    cone_member(ctx, &(y - x))
}

/// Internal normalized states are exactly the interior points of the cone.
pub fn is_internal(ctx: &ConeContext, rho: &Element) -> Result<bool> {
    ctx.check(rho)?;
    let tr = rho.trace();
    if (tr - 1.0).abs() > ctx.tol * (1.0 + rho.norm()) {
        return Err(Error::NotNormalized { trace: tr });
    }
    Ok(rho.min_eigenvalue()? > ctx.tol)
}

/// A linear functional `x ↦ Σ coeffs_j x_j` on an algebra.
#[derive(Clone, Debug)]
pub struct Functional {
    algebra: Arc<Algebra>,
    coeffs: Vec<f64>,
}

impl Functional {
    pub fn new(algebra: &Arc<Algebra>, coeffs: Vec<f64>) -> Result<Functional> {
        if coeffs.len() != algebra.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.ambient_dim(),
                actual: coeffs.len(),
            });
        }
        Ok(Functional {
            algebra: algebra.clone(),
            coeffs,
        })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Element) -> Result<f64> {
        if !same_algebra(x.algebra(), &self.algebra) {
            return Err(Error::AlgebraMismatch {
                left: x.algebra().family().to_string(),
                right: self.algebra.family().to_string(),
            });
        }
        Ok(self.coeffs.iter().zip(x.coords()).map(|(a, b)| a * b).sum())
    }
}

/// `z† : x ↦ ⟨z, x⟩`.
pub fn dagger(z: &Element) -> Functional {
    let g = z.algebra().gram();
    let v = g * nalgebra::DVector::from_column_slice(z.coords());
    Functional {
        algebra: z.algebra().clone(),
        coeffs: v.as_slice().to_vec(),
    }
}

/// Riesz vector of a functional with respect to the trace inner product.
pub fn undagger(f: &Functional) -> Element {
    let g = f.algebra.gram();
    let z = g
        .lu()
        .solve(&nalgebra::DVector::from_column_slice(&f.coeffs))
        .expect("trace form is positive definite");
    Element::new(&f.algebra, z.as_slice().to_vec()).expect("coordinate length")
}

/// The deterministic effect `u†`.
pub fn deterministic_effect(alg: &Arc<Algebra>) -> Functional {
    dagger(&Element::unit(alg))
}

/// Sampled self-duality certificate.
///
/// Checks `⟨x, y⟩ ≥ 0` on random cone pairs, then probes random functionals:
/// a functional nonnegative on the cone sample and on the Jordan frame of its
/// own Riesz vector must have its Riesz vector in the cone, and conversely.
pub fn self_duality_check(ctx: &ConeContext, n_samples: usize, seed: u64) -> Result<CheckReport> {
    let start = Stopwatch::start();
    let alg = ctx.algebra.clone();
    let mut rng = sample::seeded(seed);
    let mut report = CheckReport::new("self_duality")
        .with_tol("membership", ctx.tol);
    report.backend = Some(alg.family().to_string());
    report.seed = Some(seed);
    report.samples = n_samples;

    let mut cone_sample = Vec::with_capacity(n_samples * 2);
    let mut worst_pair = f64::INFINITY;
    for _ in 0..n_samples {
        let x = sample::cone_element(&alg, &mut rng);
        let y = sample::cone_element(&alg, &mut rng);
        let ip = x.inner(&y)?;
        let scale = x.norm() * y.norm();
        worst_pair = worst_pair.min(ip / scale.max(f64::MIN_POSITIVE));
        if ip < -ctx.tol * (1.0 + scale) {
            report.fail([Witness::element("x", &x), Witness::element("y", &y)]);
        }
        cone_sample.push(x);
        cone_sample.push(y);
    }
    let mut frame_sample = Vec::new();
    for x in cone_sample.iter().take(n_samples.min(50)) {
        frame_sample.extend(x.spectral()?.frame);
    }
    cone_sample.extend(frame_sample);

    let mut worst_member = f64::INFINITY;
    let mut positive_probes = 0;
    for i in 0..n_samples {
        let g = if i % 2 == 0 {
            dagger(&sample::cone_element(&alg, &mut rng))
        } else {
            let e = sample::gaussian_element(&alg, &mut rng);
            Functional::new(&alg, e.into_coords())?
        };
        let z = undagger(&g);
        let sd = z.spectral()?;
        let scale = 1.0 + z.norm();
        let mut min_on_sample = f64::INFINITY;
        for s in cone_sample.iter().chain(sd.frame.iter()) {
            min_on_sample = min_on_sample.min(g.eval(s)? / (1.0 + s.norm()));
        }
        let positive = min_on_sample >= -ctx.tol * scale;
        let member = cone_member(ctx, &z)?;
        if positive {
            positive_probes += 1;
            worst_member = worst_member.min(sd.eigenvalues.last().copied().unwrap_or(0.0) / scale);
        }
        if positive != member {
            report.fail([Witness::element("riesz_vector", &z)]);
        }
    }
    report.notes.push(format!("worst normalized pair inner product {worst_pair:.3e}"));
    report.notes.push(format!(
        "{positive_probes} positive functionals; worst Riesz margin {worst_member:.3e}"
    ));
    report.runtime_ms = start.elapsed_ms();
    Ok(report)
}

/// Certify that each supplied functional is a positive functional, deciding
/// dual membership through its Riesz vector. A failing functional is reported
/// with the frame member on which it is negative.
pub fn dual_cone_check(ctx: &ConeContext, functionals: &[Functional]) -> Result<CheckReport> {
    let mut report = CheckReport::new("dual_cone_membership").with_tol("membership", ctx.tol);
    report.backend = Some(ctx.algebra.family().to_string());
    report.samples = functionals.len();
    for g in functionals {
        let z = undagger(g);
        let sd = z.spectral()?;
        for (lam, p) in sd.eigenvalues.iter().zip(&sd.frame) {
            if *lam < -ctx.tol * (1.0 + z.norm()) {
                report.fail([
                    Witness::element("riesz_vector", &z),
                    Witness::element("negative_on", p),
                ]);
                break;
            }
        }
    }
    Ok(report)
}

/// Cone automorphism `Γ = P_{ρ^{1/2}} ∘ P_{τ^{-1/2}}` sending `τ` to `ρ`.
pub fn homogeneity_map(ctx: &ConeContext, tau: &Element, rho: &Element) -> Result<LinearMap> {
    for s in [tau, rho] {
        if !is_internal(ctx, s)? {
            return Err(Error::NotInternal {
                min_eigenvalue: s.min_eigenvalue()?,
            });
        }
    }
    let tau_inv_sqrt = tau.map_spectrum(|l| 1.0 / l.sqrt())?;
    let rho_sqrt = rho.map_spectrum(f64::sqrt)?;
    LinearMap::from_fn(&ctx.algebra, &ctx.algebra, |x| {
        quadratic_rep(&rho_sqrt, &quadratic_rep(&tau_inv_sqrt, x)?)
    })
}

/// Inverse of [`homogeneity_map`], `P_{τ^{1/2}} ∘ P_{ρ^{-1/2}}`.
pub fn homogeneity_map_inverse(ctx: &ConeContext, tau: &Element, rho: &Element) -> Result<LinearMap> {
    homogeneity_map(ctx, rho, tau)
}

/// Unitary-conjugation automorphism of a matrix algebra sending the pure
/// state `psi` to the pure state `phi` (both primitive idempotents).
pub fn pure_state_automorphism(psi: &Element, phi: &Element) -> Result<LinearMap> {
    let alg = psi.algebra().clone();
    let (n, k) = alg
        .matrix_shape()
        .filter(|&(_, k)| k <= 4)
        .ok_or_else(|| Error::Unsupported(format!("pure-state automorphism of {}", alg.family())))?;
    let va = leading_vector(psi)?;
    let vb = leading_vector(phi)?;
    let ba = complete_basis(&va, k);
    let bb = complete_basis(&vb, k);
    // U = Σ b_i a_i†
    let mut u = FieldMatrix::zeros(n, k);
    for (a, b) in ba.iter().zip(&bb) {
        let o = FieldMatrix::from_fn(n, k, |i, j| b[i].mul(&a[j].conj(), k));
        for (x, y) in u.data.iter_mut().zip(o.data) {
            *x += y;
        }
    }
    let ua = u.adjoint();
    LinearMap::from_fn(&alg, &alg, |x| {
        let m = x.to_field_matrix().unwrap();
        Element::from_field_matrix(&alg, &u.mul(&m).mul(&ua))
    })
}

fn leading_vector(p: &Element) -> Result<Vec<Hc>> {
    let m = p
        .to_field_matrix()
        .ok_or_else(|| Error::Unsupported(p.algebra().family().to_string()))?;
    let (vals, vecs) = m.eigh();
    if vals.len() > 1 && vals[1].abs() > 1e-8 {
        return Err(Error::NotPure);
    }
    Ok(vecs.into_iter().next().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eja::{make_algebra, Family};

    fn el(a: &Arc<Algebra>, c: &[f64]) -> Element {
        Element::new(a, c.to_vec()).unwrap()
    }

    #[test]
    fn membership_examples() {
        let s4 = make_algebra(Family::Spin(4)).unwrap();
        let ctx = ConeContext::with_default_tol(&s4);
        assert!(cone_member(&ctx, &Element::unit(&s4)).unwrap());
        assert!(!cone_member(&ctx, &el(&s4, &[1.0, 2.0, 0.0, 0.0])).unwrap());
        let x = el(&s4, &[0.3, -1.0, 2.0, 0.5]);
        assert!(cone_member(&ctx, &x.square()).unwrap());
    }

    #[test]
    fn order_examples() {
        let c2 = make_algebra(Family::ComplexHerm(2)).unwrap();
        let ctx = ConeContext::with_default_tol(&c2);
        let x = el(&c2, &[0.2, 0.7, 0.1, -0.3]).square();
        assert!(order_leq(&ctx, &Element::zero(&c2), &x).unwrap());
        let p = x.spectral().unwrap().frame[0].clone();
        assert!(order_leq(&ctx, &p, &Element::unit(&c2)).unwrap());
        assert!(!order_leq(&ctx, &el(&c2, &[0.6, 0.5, 0., 0.]), &el(&c2, &[0.5, 0.6, 0., 0.])).unwrap());
    }

    #[test]
    fn internal_examples() {
        let c2 = make_algebra(Family::ComplexHerm(2)).unwrap();
        let ctx = ConeContext::with_default_tol(&c2);
        assert!(is_internal(&ctx, &Element::unit(&c2).scale(0.5)).unwrap());
        assert!(!is_internal(&ctx, &el(&c2, &[1.0, 0.0, 0.0, 0.0])).unwrap());
        assert!(is_internal(&ctx, &el(&c2, &[0.999, 0.001, 0.0, 0.0])).unwrap());
        assert!(matches!(
            is_internal(&ctx, &Element::unit(&c2)),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn dagger_examples() {
        let s5 = make_algebra(Family::Spin(5)).unwrap();
        let mut rng = sample::seeded(3);
        let rho = sample::random_state(&s5, &mut rng);
        let e = deterministic_effect(&s5);
        assert!((e.eval(&rho).unwrap() - 1.0).abs() < 1e-12);
        assert!(dagger(&Element::zero(&s5)).coeffs().iter().all(|c| *c == 0.0));
        let z = sample::gaussian_element(&s5, &mut rng);
        assert!(undagger(&dagger(&z)).dist(&z) < 1e-12);
        let sd = z.spectral().unwrap();
        assert!(dagger(&sd.frame[0]).eval(&sd.frame[1]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn self_duality_passes_and_adversarial_fails() {
        let c3 = make_algebra(Family::ComplexHerm(3)).unwrap();
        let ctx = ConeContext::with_default_tol(&c3);
        assert!(self_duality_check(&ctx, 200, 1).unwrap().passed());

        let c2 = make_algebra(Family::ComplexHerm(2)).unwrap();
        let ctx2 = ConeContext::with_default_tol(&c2);
        let bad = dagger(&el(&c2, &[1.0, -1.0, 0.0, 0.0]));
        let rep = dual_cone_check(&ctx2, &[bad]).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.witnesses[1].coords, vec![0.0, 1.0, 0.0, 0.0]);
        let good = deterministic_effect(&c2);
        assert!(dual_cone_check(&ctx2, &[good]).unwrap().passed());
    }

    #[test]
    fn homogeneity_examples() {
        let c2 = make_algebra(Family::ComplexHerm(2)).unwrap();
        let ctx = ConeContext::with_default_tol(&c2);
        let chi = Element::unit(&c2).scale(0.5);
        let id = homogeneity_map(&ctx, &chi, &chi).unwrap();
        assert!(id.max_diff(&LinearMap::identity(&c2)) < 1e-12);

        let rho = el(&c2, &[0.75, 0.25, 0.0, 0.0]);
        let g = homogeneity_map(&ctx, &chi, &rho).unwrap();
        assert!(g.apply(&chi).unwrap().dist(&rho) < 1e-12);
        // here Γ = 2·P_{ρ^{1/2}}
        let rs = rho.map_spectrum(f64::sqrt).unwrap();
        let expect = LinearMap::from_fn(&c2, &c2, |x| Ok(quadratic_rep(&rs, x)?.scale(2.0))).unwrap();
        assert!(g.max_diff(&expect) < 1e-12);

        let boundary = el(&c2, &[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(homogeneity_map(&ctx, &chi, &boundary), Err(Error::NotInternal { .. })));
    }

    #[test]
    fn pure_state_automorphism_maps_psi_to_phi() {
        let c3 = make_algebra(Family::ComplexHerm(3)).unwrap();
        let mut rng = sample::seeded(9);
        let psi = sample::gaussian_element(&c3, &mut rng).spectral().unwrap().frame[0].clone();
        let phi = sample::gaussian_element(&c3, &mut rng).spectral().unwrap().frame[2].clone();
        let u = pure_state_automorphism(&psi, &phi).unwrap();
        assert!(u.apply(&psi).unwrap().dist(&phi) < 1e-10);
        assert!(u.apply(&Element::unit(&c3)).unwrap().dist(&Element::unit(&c3)) < 1e-10);
    }
}
