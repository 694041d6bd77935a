//! Purifications for the quantum backends and the classical negative case.
//!
//! A pure state of `A ⊗ Ã` is stored both as a density matrix and as the
//! matricization `M` of its vector, `ψ[j·n + k] = M[j][k]`. With this
//! convention the first marginal is `M M†` and the second is `Mᵀ M̄`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::cone::{cone_member, is_internal, ConeContext, LinearMap};
use crate::eja::{Algebra, Element, Family, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{cmax_abs_diff, herm_eigh, partial_trace, CMat, CVec};
use crate::theory::{BackendKind, Channel};

#[derive(Clone, Debug)]
pub struct PurificationPair {
    pub kind: BackendKind,
    pub n: usize,
    pub rho: Element,
    pub psi: Element,
    pub m: CMat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

#[derive(Clone, Debug)]
pub struct SteeringResult {
    /// Effects on the purifying system, as cone elements (apply via dagger).
    pub effects: Vec<Element>,
    pub ensemble: Vec<Element>,
    /// Largest deviation of `(id ⊗ b_i)(Ψ)` from `σ_i`.
    pub max_residual: f64,
}

#[derive(Clone, Debug)]
pub struct ZigzagPair {
    pub effect: Element,
    pub p: f64,
    /// Worst deviation of each snake map from `p · id` on a matrix-unit basis.
    pub residuals: [f64; 2],
}

#[derive(Clone, Debug)]
pub struct UniquenessResult {
    pub v: CMat,
    pub channel: Channel,
    pub residual: f64,
}

fn quantum(kind: BackendKind) -> Result<()> {
    match kind {
        BackendKind::Classical => Err(Error::Unsupported("purification in the classical backend".into())),
        _ => Ok(()),
    }
}

fn check_state(rho: &Element, tol: f64) -> Result<()> {
    let t = rho.trace();
    if (t - 1.0).abs() > tol {
        return Err(Error::NotNormalized { trace: t });
    }
    let min = rho.min_eigenvalue()?;
    if min < -tol {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(())
}

/// Row-major vectorization.
pub fn vec_of(m: &CMat) -> CVec {
    CVec::from_iterator(m.len(), m.transpose().iter().copied())
}

pub fn unvec(v: &CVec, n: usize) -> CMat {
    CMat::from_fn(n, n, |j, k| v[j * n + k])
}

fn family_like(f: &Family, n: usize) -> Result<Family> {
    Ok(match f {
        Family::RealSym(_) => Family::RealSym(n),
        Family::ComplexHerm(_) => Family::ComplexHerm(n),
        Family::DirectSum(_) => Family::DirectSum(vec![Family::ComplexHerm(1); n]),
        other => return Err(Error::Unsupported(format!("partial trace on {other}"))),
    })
}

fn composite_algebra(kind: BackendKind, n: usize) -> Result<Arc<Algebra>> {
    kind.algebra(n * n)
}

/// Eigenvalues of a normalized state below this are rounding noise; their
/// square roots would otherwise leak into the purification.
const EIGEN_FLOOR: f64 = 1e-14;

fn sqrt_psd(m: &CMat) -> CMat {
    crate::linalg::herm_apply(m, |l| if l > EIGEN_FLOOR { l.sqrt() } else { 0.0 })
}

fn real_part(m: &CMat) -> CMat {
    m.map(|z| Complex64::new(z.re, 0.0))
}

/// `M = √ρ`, so `ψ = Σ √λ_i |i⟩|ī⟩` in the eigenbasis of `ρ`.
pub fn purify(kind: BackendKind, rho: &Element) -> Result<PurificationPair> {
    quantum(kind)?;
    check_state(rho, DEFAULT_TOL)?;
    let r = rho.to_cmat()?;
    let n = r.nrows();
    let mut m = sqrt_psd(&r);
    if kind == BackendKind::RealQT {
        m = real_part(&m);
    }
    let psi = pure_from_matrix(kind, &m)?;
    Ok(PurificationPair {
        kind,
        n,
        rho: rho.clone(),
        psi,
        m,
    })
}

/// Density matrix of `vec(m)` on the composite `n·n` system.
pub fn pure_from_matrix(kind: BackendKind, m: &CMat) -> Result<Element> {
    let v = vec_of(m);
    let alg = composite_algebra(kind, m.nrows())?;
    Element::from_cmat(&alg, &(&v * v.adjoint()))
}

/// Partial trace of a composite `n_a · n_b` element, keeping `keep`.
pub fn marginal(psi: &Element, n_a: usize, n_b: usize, keep: Factor) -> Result<Element> {
    let m = psi.to_cmat()?;
    if m.nrows() != n_a * n_b {
        return Err(Error::DimensionMismatch {
            expected: n_a * n_b,
            actual: m.nrows(),
        });
    }
    let first = keep == Factor::First;
    let reduced = partial_trace(&m, n_a, n_b, first);
    let n = if first { n_a } else { n_b };
    let alg = crate::eja::make_algebra(family_like(psi.algebra().family(), n)?)?;
    Element::from_cmat(&alg, &reduced)
}

impl PurificationPair {
    pub fn marginal(&self, keep: Factor) -> Result<Element> {
        marginal(&self.psi, self.n, self.n, keep)
    }
}

/// State of the purifying system, `Mᵀ M̄` (the entrywise conjugate of `ρ`
/// for `M = √ρ`).
pub fn complementary_state(pair: &PurificationPair) -> Result<Element> {
    pair.marginal(Factor::Second)
}

/// `(id ⊗ b)(Ψ)`: apply an effect, given as a cone element, to the second
/// factor of a composite `n·n` element.
pub fn apply_effect_second(psi: &Element, n: usize, b: &Element) -> Result<Element> {
    let p = psi.to_cmat()?;
    let bm = b.to_cmat()?;
    let lifted = CMat::identity(n, n).kronecker(&bm);
    let reduced = partial_trace(&(lifted * p), n, n, true);
    let herm = (&reduced + reduced.adjoint()) * Complex64::new(0.5, 0.0);
    Element::from_cmat(b.algebra(), &herm)
}

/// Measurement on the purifying system steering `Ψ` to the ensemble:
/// `b_i = (ρ^{-1/2} σ_i ρ^{-1/2})ᵀ` on the support of `ρ`, with the kernel
/// projector transposed onto `b_1`.
pub fn steering_measurement(pair: &PurificationPair, ensemble: &[Element]) -> Result<SteeringResult> {
    if ensemble.is_empty() {
        return Err(Error::InvalidInput("empty ensemble".into()));
    }
    let alg = pair.rho.algebra();
    let ctx = ConeContext::with_default_tol(alg);
    let mut sum = Element::zero(alg);
    for s in ensemble {
        if s.algebra().family() != alg.family() {
            return Err(Error::AlgebraMismatch {
                left: s.algebra().family().to_string(),
                right: alg.family().to_string(),
            });
        }
        if !cone_member(&ctx, s)? {
            return Err(Error::NotPositive {
                min_eigenvalue: s.min_eigenvalue()?,
            });
        }
        sum = &sum + s;
    }
    let deviation = sum.max_diff(&pair.rho);
    if deviation > DEFAULT_TOL {
        return Err(Error::EnsembleMismatch { deviation });
    }

    let r = pair.rho.to_cmat()?;
    let (vals, vecs) = herm_eigh(&r);
    let n = pair.n;
    let mut inv_sqrt = CMat::zeros(n, n);
    let mut kernel = CMat::zeros(n, n);
    for (l, v) in vals.iter().zip(&vecs) {
        let proj = v * v.adjoint();
        if *l > DEFAULT_TOL {
            inv_sqrt += proj * Complex64::new(1.0 / l.sqrt(), 0.0);
        } else {
            kernel += proj;
        }
    }

    let mut effects = Vec::with_capacity(ensemble.len());
    for (i, s) in ensemble.iter().enumerate() {
        let mut b = (&inv_sqrt * s.to_cmat()? * &inv_sqrt).transpose();
        if i == 0 {
            b += kernel.transpose();
        }
        effects.push(Element::from_cmat(alg, &b)?);
    }
    let mut max_residual: f64 = 0.0;
    for (b, s) in effects.iter().zip(ensemble) {
        let steered = apply_effect_second(&pair.psi, n, b)?;
        max_residual = max_residual.max(steered.max_diff(s));
    }
    Ok(SteeringResult {
        effects,
        ensemble: ensemble.to_vec(),
        max_residual,
    })
}

/// Two-outcome steering `{b, e − b}` for a refinement `σ ≤ ρ`.
pub fn steering_refinement(pair: &PurificationPair, sigma: &Element) -> Result<SteeringResult> {
    steering_measurement(pair, &[sigma.clone(), &pair.rho - sigma])
}

/// First snake map `X ↦ tr₂₃[(1 ⊗ E)(Ψ ⊗ X)]`, evaluated on full operators.
pub fn snake_first(psi: &CMat, e: &CMat, x: &CMat) -> CMat {
    let n = x.nrows();
    let lhs = CMat::identity(n, n).kronecker(e);
    partial_trace(&(lhs * psi.kronecker(x)), n, n * n, true)
}

/// Second snake map `X ↦ tr₁₂[(E ⊗ 1)(X ⊗ Ψ)]`.
pub fn snake_second(psi: &CMat, e: &CMat, x: &CMat) -> CMat {
    let n = x.nrows();
    let lhs = e.kronecker(&CMat::identity(n, n));
    partial_trace(&(lhs * x.kronecker(psi)), n * n, n, false)
}

fn matrix_units(n: usize) -> impl Iterator<Item = CMat> {
    (0..n * n).map(move |c| {
        let mut m = CMat::zeros(n, n);
        m[(c / n, c % n)] = Complex64::new(1.0, 0.0);
        m
    })
}

/// Rank-one effect `E = φφ†` with `φ = vec(√p · (M⁻¹)ᵀ)` and the largest `p`
/// keeping `E ≤ 1`, namely `p = 1 / tr(ρ⁻¹)`.
pub fn zigzag_pair(kind: BackendKind, rho: &Element) -> Result<ZigzagPair> {
    quantum(kind)?;
    let ctx = ConeContext::with_default_tol(rho.algebra());
    if !is_internal(&ctx, rho)? {
        return Err(Error::NotInternal {
            min_eigenvalue: rho.min_eigenvalue()?,
        });
    }
    let pair = purify(kind, rho)?;
    let m_inv = pair.m.clone().try_inverse().ok_or(Error::Singular)?;
    let p = 1.0 / m_inv.norm_squared();
    let n_mat = m_inv.transpose() * Complex64::new(p.sqrt(), 0.0);
    let effect = pure_from_matrix(kind, &n_mat)?;

    let psi = pair.psi.to_cmat()?;
    let e = effect.to_cmat()?;
    let pz = Complex64::new(p, 0.0);
    let mut residuals = [0.0f64; 2];
    for x in matrix_units(pair.n) {
        let target = &x * pz;
        residuals[0] = residuals[0].max(cmax_abs_diff(&snake_first(&psi, &e, &x), &target));
        residuals[1] = residuals[1].max(cmax_abs_diff(&snake_second(&psi, &e, &x), &target));
    }
    Ok(ZigzagPair { effect, p, residuals })
}

/// `Γ_{τ,ρ} = p_τ⁻¹ (id ⊗ E_τ)(Ψ_ρ ⊗ id)`, tabulated as a map on the algebra.
pub fn zigzag_gamma(kind: BackendKind, tau: &Element, rho: &Element) -> Result<LinearMap> {
    let z = zigzag_pair(kind, tau)?;
    let psi = purify(kind, rho)?.psi.to_cmat()?;
    let e = z.effect.to_cmat()?;
    let alg = rho.algebra().clone();
    LinearMap::from_fn(&alg, &alg, |x| {
        let y = snake_first(&psi, &e, &x.to_cmat()?) * Complex64::new(1.0 / z.p, 0.0);
        Element::from_cmat(&alg, &y)
    })
}

/// Singular values of `M† M'` below this are treated as kernel.
const SUPPORT_TOL: f64 = 1e-18;

fn top_vector(psi: &Element, tol: f64) -> Result<(CVec, usize)> {
    let m = psi.to_cmat()?;
    let dim = m.nrows();
    let n = (dim as f64).sqrt().round() as usize;
    if n * n != dim {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            actual: dim,
        });
    }
    let (vals, vecs) = herm_eigh(&m);
    let pure = (vals[0] - 1.0).abs() <= tol && vals[1..].iter().all(|l| l.abs() <= tol);
    if !pure {
        return Err(Error::NotPure);
    }
    Ok((vecs[0].clone(), n))
}

/// Orthonormal basis of the range of `q` (a projector), by Gram–Schmidt on
/// its columns in order.
fn range_basis(q: &CMat) -> Vec<CVec> {
    let mut out: Vec<CVec> = Vec::new();
    for j in 0..q.ncols() {
        let mut v = q.column(j).into_owned();
        for b in &out {
            let c = b.dotc(&v);
            v -= b * c;
        }
        let nv = v.norm();
        if nv > 1e-6 {
            out.push(v / Complex64::new(nv, 0.0));
        }
    }
    out
}

/// Unitary `V` on the purifying factor with `(1 ⊗ V) Ψ (1 ⊗ V)† = Ψ'`.
///
/// `Vᵀ` is the unitary polar factor of `M† M'` on its support; the kernel is
/// completed by matching the Gram–Schmidt bases of the two complements, so
/// equal inputs give the identity.
pub fn uniqueness_unitary(kind: BackendKind, psi: &Element, psi_prime: &Element) -> Result<UniquenessResult> {
    quantum(kind)?;
    let tol = 1e-8;
    let (v1, n) = top_vector(psi, tol)?;
    let (v2, n2) = top_vector(psi_prime, tol)?;
    if n != n2 {
        return Err(Error::DimensionMismatch { expected: n, actual: n2 });
    }
    let m1 = unvec(&v1, n);
    let m2 = unvec(&v2, n);
    let rho1 = &m1 * m1.adjoint();
    let rho2 = &m2 * m2.adjoint();
    let deviation = cmax_abs_diff(&rho1, &rho2);
    if deviation > tol {
        return Err(Error::NoCommonMarginal { deviation });
    }

    // polar factor of M† M' on its support: M' = M W with W unitary
    let a = m1.adjoint() * &m2;
    let svd = a.svd(true, true);
    let (u, vt) = (svd.u.expect("left vectors"), svd.v_t.expect("right vectors"));
    let id = CMat::identity(n, n);
    let mut w = CMat::zeros(n, n);
    let mut p1 = CMat::zeros(n, n);
    let mut p2 = CMat::zeros(n, n);
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s > SUPPORT_TOL {
            let uk = u.column(k).into_owned();
            let vk = vt.row(k).adjoint();
            w += &uk * vk.adjoint();
            p1 += &uk * uk.adjoint();
            p2 += &vk * vk.adjoint();
        }
    }
    for (c1, c2) in range_basis(&(&id - p1)).iter().zip(range_basis(&(&id - p2)).iter()) {
        w += c1 * c2.adjoint();
    }
    let mut v = w.transpose();
    if kind == BackendKind::RealQT {
        v = real_part(&v);
    }

    let target = psi_prime.to_cmat()?;
    let lifted = CMat::identity(n, n).kronecker(&v);
    let moved = &lifted * psi.to_cmat()? * lifted.adjoint();
    let residual = cmax_abs_diff(&moved, &target);
    if residual > tol {
        return Err(Error::InvalidInput(format!(
            "purifications are not related by a unitary (residual {residual:e})"
        )));
    }
    let channel = Channel::from_kraus(kind, n, n, &[v.clone()])?;
    Ok(UniquenessResult { v, channel, residual })
}

/// Whether `ρ` is the marginal of a pure state of `A ⊗ Ã`.
///
/// Quantum backends purify every state. Pure classical states of a composite
/// are product deltas, so a classical state is purifiable iff it is pure.
/// Returns `false` for inputs that are not normalized states.
pub fn purification_exists(kind: BackendKind, rho: &Element) -> bool {
    if check_state(rho, DEFAULT_TOL).is_err() {
        return false;
    }
    match kind {
        BackendKind::Classical => {
            rho.coords().iter().filter(|c| c.abs() > DEFAULT_TOL).count() == 1
        }
        _ => purify(kind, rho).is_ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;

    fn state(kind: BackendKind, rows: &[f64]) -> Element {
        let n = (rows.len() as f64).sqrt() as usize;
        let m = crate::linalg::to_complex(&Mat::from_row_slice(n, n, rows));
        Element::from_cmat(&kind.algebra(n).unwrap(), &m).unwrap()
    }

    #[test]
    fn purify_examples() {
        let c = BackendKind::ComplexQT;
        let p = purify(c, &state(c, &[1.0, 0.0, 0.0, 0.0])).unwrap();
        let v = vec_of(&p.m);
        assert!((v[0].re - 1.0).abs() < 1e-15 && v.iter().skip(1).all(|z| z.norm() < 1e-15));

        let bell = purify(c, &state(c, &[0.5, 0.0, 0.0, 0.5])).unwrap();
        let b = bell.psi.to_cmat().unwrap();
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((b[(i, j)].re - 0.5).abs() < 1e-14);
        }

        let r = BackendKind::RealQT;
        let p = purify(r, &state(r, &[0.75, 0.0, 0.0, 0.25])).unwrap();
        let v: Vec<f64> = vec_of(&p.m).iter().map(|z| z.re).collect();
        let expect = [0.75f64.sqrt(), 0.0, 0.0, 0.5];
        for (a, e) in v.iter().zip(expect) {
            assert!((a - e).abs() < 1e-14);
        }
        assert!(matches!(purify(BackendKind::Classical, &state(c, &[1.0, 0.0, 0.0, 0.0])), Err(Error::Unsupported(_))));
        assert!(matches!(purify(c, &state(c, &[0.6, 0.0, 0.0, 0.6])), Err(Error::NotNormalized { .. })));
        assert!(matches!(purify(c, &state(c, &[1.2, 0.0, 0.0, -0.2])), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn bell_marginals_and_steering() {
        let c = BackendKind::ComplexQT;
        let half = state(c, &[0.5, 0.0, 0.0, 0.5]);
        let pair = purify(c, &half).unwrap();
        assert!(pair.marginal(Factor::First).unwrap().dist(&half) < 1e-14);
        assert!(complementary_state(&pair).unwrap().dist(&half) < 1e-14);

        let s0 = state(c, &[0.5, 0.0, 0.0, 0.0]);
        let s1 = state(c, &[0.0, 0.0, 0.0, 0.5]);
        let res = steering_measurement(&pair, &[s0, s1]).unwrap();
        assert!(res.effects[0].dist(&state(c, &[1.0, 0.0, 0.0, 0.0])) < 1e-14);
        assert!(res.effects[1].dist(&state(c, &[0.0, 0.0, 0.0, 1.0])) < 1e-14);
        assert!(res.max_residual < 1e-12);

        let single = steering_measurement(&pair, std::slice::from_ref(&half)).unwrap();
        assert!(single.effects[0].dist(&Element::unit(half.algebra())) < 1e-14);
    }

    #[test]
    fn steering_rejects_bad_ensembles() {
        let c = BackendKind::ComplexQT;
        let pair = purify(c, &state(c, &[0.5, 0.0, 0.0, 0.5])).unwrap();
        let s = state(c, &[0.5, 0.0, 0.0, 0.0]);
        assert!(matches!(steering_measurement(&pair, std::slice::from_ref(&s)), Err(Error::EnsembleMismatch { .. })));
        let neg = state(c, &[0.6, 0.0, 0.0, -0.1]);
        let rest = &pair.rho - &neg;
        assert!(matches!(steering_measurement(&pair, &[neg, rest]), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn zigzag_maximally_mixed() {
        for kind in [BackendKind::ComplexQT, BackendKind::RealQT] {
            for n in 2..=3 {
                let rho = Element::unit(&kind.algebra(n).unwrap()).scale(1.0 / n as f64);
                let z = zigzag_pair(kind, &rho).unwrap();
                assert!((z.p - 1.0 / (n * n) as f64).abs() < 1e-14);
                assert!(z.residuals.iter().all(|r| *r < 1e-12));
                let sd = z.effect.spectral().unwrap();
                assert!((sd.eigenvalues[0] - 1.0).abs() < 1e-12);
            }
        }
        let c = BackendKind::ComplexQT;
        assert!(matches!(zigzag_pair(c, &state(c, &[1.0, 0.0, 0.0, 0.0])), Err(Error::NotInternal { .. })));
    }

    #[test]
    fn uniqueness_identity_and_bit_flip() {
        let c = BackendKind::ComplexQT;
        let pair = purify(c, &state(c, &[0.5, 0.0, 0.0, 0.5])).unwrap();
        let same = uniqueness_unitary(c, &pair.psi, &pair.psi).unwrap();
        assert!(cmax_abs_diff(&same.v, &CMat::identity(2, 2)) < 1e-12);

        let x = crate::linalg::to_complex(&Mat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let flipped = pure_from_matrix(c, &(&pair.m * x.transpose())).unwrap();
        let u = uniqueness_unitary(c, &pair.psi, &flipped).unwrap();
        assert!(cmax_abs_diff(&u.v, &x) < 1e-12);
        assert!(u.channel.is_reversible(1e-10));

        let other = purify(c, &state(c, &[0.9, 0.0, 0.0, 0.1])).unwrap();
        assert!(matches!(uniqueness_unitary(c, &pair.psi, &other.psi), Err(Error::NoCommonMarginal { .. })));
        assert!(matches!(uniqueness_unitary(c, &pair.psi.scale(0.5), &pair.psi), Err(Error::NotPure)));
    }

    #[test]
    fn classical_purification_decision() {
        let alg = BackendKind::Classical.algebra(3).unwrap();
        let pure = Element::new(&alg, vec![1.0, 0.0, 0.0]).unwrap();
        let mixed = Element::new(&alg, vec![0.5, 0.5, 0.0]).unwrap();
        assert!(purification_exists(BackendKind::Classical, &pure));
        assert!(!purification_exists(BackendKind::Classical, &mixed));
        let r = BackendKind::RealQT;
        assert!(purification_exists(r, &state(r, &[0.5, 0.0, 0.0, 0.5])));
    }
}
