//! The two postulates checked on each backend, the composite-system
//! classification sweep, and the combined verdict table.

use num_complex::Complex64;

use crate::eja::classify::matrix_family_dims;
use crate::eja::{classify_simple, Element, Family};
use crate::error::{Error, Result};
use crate::linalg::{rank, to_complex, CMat, Mat};
use crate::purification::{purification_exists, pure_from_matrix, purify, uniqueness_unitary, Factor};
use crate::report::{CheckReport, ClassificationRecord, Stopwatch, TableRow, Verdict, Witness};
use crate::sample;
use crate::theory::{BackendKind, Channel, SystemRef, TheoryBackend};

pub const DEFAULT_SAMPLES: usize = 50;
pub const DEFAULT_SEED: u64 = 2024;

/// Verdicts every backend is expected to produce: (local equivalence, ES purification).
pub const EXPECTED_TABLE: [(BackendKind, bool, bool); 3] = [
    (BackendKind::Classical, true, false),
    (BackendKind::RealQT, false, true),
    (BackendKind::ComplexQT, true, true),
];

fn require_levels(levels: &[usize]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::InvalidParameter("at least one level required".into()));
    }
    if levels.contains(&0) {
        return Err(Error::InvalidParameter("levels must be positive".into()));
    }
    Ok(())
}

/// Local equivalence through local tomography: `d_AB = d_A d_B` and no pair
/// of composite states indistinguishable by product effects, for every pair
/// of the given levels.
pub fn check_local_equivalence(kind: BackendKind, levels: &[usize]) -> Result<CheckReport> {
    require_levels(levels)?;
    let start = Stopwatch::start();
    let be = TheoryBackend::new(kind);
    let mut rep = CheckReport::new("local_equivalence").with_tol("span_rank", 1e-9);
    rep.backend = Some(kind.name().into());
    rep.levels = levels.to_vec();
    for (i, &a) in levels.iter().enumerate() {
        for &b in &levels[i..] {
            let (sa, sb) = (SystemRef::new(kind, a), SystemRef::new(kind, b));
            let dims = be.dimension_identity_check(sa, sb)?;
            let tomo = be.product_tomography_witness(sa, sb)?;
            rep.samples += 1;
            rep.notes.push(format!(
                "({a},{b}): d_AB = {}, product span {}",
                tomo.composite_dim, tomo.product_span_rank
            ));
            if !dims.passed() {
                rep.fail(dims.witnesses);
            }
            if let Some((plus, minus)) = tomo.witness {
                rep.fail([Witness::element("rho_plus", &plus), Witness::element("rho_minus", &minus)]);
            }
        }
    }
    rep.runtime_ms = start.elapsed_ms();
    Ok(rep)
}

/// Existence and uniqueness of purifications on sampled states. The sample
/// at each level starts with the maximally mixed state.
pub fn check_es_purification(kind: BackendKind, levels: &[usize], n_samples: usize, seed: u64) -> Result<CheckReport> {
    require_levels(levels)?;
    let start = Stopwatch::start();
    let mut rng = sample::seeded(seed);
    let mut rep = CheckReport::new("es_purification")
        .with_tol("marginal", 1e-9)
        .with_tol("uniqueness", 1e-8);
    rep.backend = Some(kind.name().into());
    rep.levels = levels.to_vec();
    rep.seed = Some(seed);
    let mut worst_marginal: f64 = 0.0;
    let mut worst_unique: f64 = 0.0;

    for &n in levels {
        let alg = kind.algebra(n)?;
        let count = n_samples.max(1);
        for s in 0..count {
            let rho = if s == 0 {
                Element::unit(&alg).scale(1.0 / n as f64)
            } else {
                sample::random_state(&alg, &mut rng)
            };
            rep.samples += 1;
            if !purification_exists(kind, &rho) {
                rep.fail([Witness::element("unpurifiable_state", &rho)]);
                break;
            }
            if kind == BackendKind::Classical {
                continue;
            }
            let pair = purify(kind, &rho)?;
            let dev = pair.marginal(Factor::First)?.max_diff(&rho);
            worst_marginal = worst_marginal.max(dev);
            if dev > 1e-9 {
                rep.fail([Witness::element("state", &rho)]);
                continue;
            }
            let u = match kind {
                BackendKind::RealQT => to_complex(&sample::random_orthogonal(n, &mut rng)),
                _ => sample::random_unitary(n, &mut rng),
            };
            let other = pure_from_matrix(kind, &(&pair.m * u.transpose()))?;
            match uniqueness_unitary(kind, &pair.psi, &other) {
                Ok(res) if res.channel.is_reversible(1e-8) => worst_unique = worst_unique.max(res.residual),
                _ => rep.fail([Witness::element("purification", &pair.psi), Witness::element("other", &other)]),
            }
        }
    }
    if kind != BackendKind::Classical {
        rep.notes.push(format!("worst marginal deviation {worst_marginal:.3e}"));
        rep.notes.push(format!("worst uniqueness residual {worst_unique:.3e}"));
    }
    rep.runtime_ms = start.elapsed_ms();
    Ok(rep)
}

fn candidates(n: usize) -> Vec<Family> {
    let mut out = vec![Family::RealSym(n), Family::ComplexHerm(n), Family::QuatHerm(n)];
    if n == 3 {
        out.push(Family::OctHerm3);
    }
    if n == 2 {
        // Spin(3), Spin(4), Spin(6) coincide with the rank-2 matrix algebras
        out.push(Family::Spin(5));
        out.extend((7..=12).map(Family::Spin));
    }
    out
}

/// For each simple candidate of rank `n`, the composite of two copies must be
/// a simple algebra of rank `n²` and dimension `d²`. Only `ComplexHerm(n)`
/// should admit one.
pub fn classification_exclusion(ns: impl IntoIterator<Item = usize>) -> Result<CheckReport> {
    let start = Stopwatch::start();
    let mut rep = CheckReport::new("classification_exclusion");
    for n in ns {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("n_A must be at least 2, got {n}")));
        }
        rep.levels.push(n);
        for f in candidates(n) {
            let (_, d) = f.rank_dim().expect("simple family");
            let (r, dd) = (n * n, d * d);
            let survivors = classify_simple(r, dd);
            let rank_dims = matrix_family_dims(r).to_vec();
            let excluded = survivors.is_empty();
            match &f {
                Family::RealSym(_) => rep.notes.push(format!(
                    "n_A = {n}, {f}: d = {dd} < r(r+1)/2 = {}",
                    rank_dims[0]
                )),
                Family::QuatHerm(_) => rep.notes.push(format!(
                    "n_A = {n}, {f}: d = {dd} > r(2r-1) = {}",
                    rank_dims[2]
                )),
                _ => {}
            }
            let expect_survive = f == Family::ComplexHerm(n);
            if excluded == expect_survive {
                rep.fail([Witness::values(format!("{f}: rank, dim"), vec![r as f64, dd as f64])]);
            }
            rep.records.push(ClassificationRecord {
                n_a: n,
                candidate: f.to_string(),
                composite_rank: r,
                composite_dim: dd,
                rank_dims,
                excluded,
                composite_family: survivors.first().map(|s| s.to_string()),
            });
            rep.samples += 1;
        }
    }
    rep.runtime_ms = start.elapsed_ms();
    Ok(rep)
}

/// Both postulates on all three backends, compared against [`EXPECTED_TABLE`].
pub fn postulate_table(levels: &[usize], n_samples: usize, seed: u64) -> Result<CheckReport> {
    require_levels(levels)?;
    let start = Stopwatch::start();
    let mut rep = CheckReport::new("postulate_table");
    rep.levels = levels.to_vec();
    rep.seed = Some(seed);
    for (kind, exp_le, exp_es) in EXPECTED_TABLE {
        let le = check_local_equivalence(kind, levels)?;
        let es = check_es_purification(kind, levels, n_samples, seed)?;
        rep.samples += le.samples + es.samples;
        for (name, sub) in [("local_equivalence", &le), ("es_purification", &es)] {
            for (k, v) in &sub.tolerances {
                rep.tolerances.insert(format!("{name}.{k}"), *v);
            }
            for w in &sub.witnesses {
                let mut w = w.clone();
                w.label = format!("{}/{name}/{}", kind.name(), w.label);
                rep.witnesses.push(w);
            }
        }
        let row = TableRow {
            theory: kind.theory_name().into(),
            local_equivalence: le.passed(),
            es_purification: es.passed(),
        };
        if row.local_equivalence != exp_le || row.es_purification != exp_es {
            rep.verdict = Verdict::Fail;
            rep.notes.push(format!("{} deviates from the expected pattern", kind.theory_name()));
            if rep.witnesses.is_empty() {
                rep.witnesses.push(Witness::values(
                    format!("{}: local_equivalence, es_purification", kind.name()),
                    vec![row.local_equivalence as u8 as f64, row.es_purification as u8 as f64],
                ));
            }
        }
        rep.table.push(row);
    }
    rep.runtime_ms = start.elapsed_ms();
    Ok(rep)
}

/// Two complex quantum transformations on a qubit are recovered from their
/// statistics on a spanning set of states and effects, so agreement on all
/// those pairs forces equality as maps.
pub fn local_equivalence_spot_test(seed: u64) -> Result<CheckReport> {
    let start = Stopwatch::start();
    let kind = BackendKind::ComplexQT;
    let n = 2;
    let alg = kind.algebra(n)?;
    let mut rng = sample::seeded(seed);
    let mut rep = CheckReport::new("local_equivalence_spot").with_tol("reconstruction", 1e-9);
    rep.backend = Some(kind.name().into());
    rep.levels = vec![n];
    rep.seed = Some(seed);

    // random channel from two Kraus operators K_i = A_i S^{-1/2}
    let a: Vec<CMat> = (0..2)
        .map(|_| CMat::from_fn(n, n, |_, _| Complex64::new(sample::gaussian(&mut rng), sample::gaussian(&mut rng))))
        .collect();
    let s: CMat = a.iter().map(|k| k.adjoint() * k).fold(CMat::zeros(n, n), |acc, x| acc + x);
    let s_inv_sqrt = crate::linalg::herm_apply(&s, |l| 1.0 / l.sqrt());
    let kraus: Vec<CMat> = a.iter().map(|k| k * &s_inv_sqrt).collect();
    let f = Channel::from_kraus(kind, n, n, &kraus)?.as_linear_map()?;

    // spanning states (columns) and effects (rows) from random cone elements
    let d = alg.dim();
    let states: Vec<Element> = (0..d).map(|_| sample::random_state(&alg, &mut rng)).collect();
    let effects: Vec<Element> = (0..d).map(|_| sample::cone_element(&alg, &mut rng)).collect();
    let r = Mat::from_fn(d, d, |i, j| states[j].coords()[i]);
    let e = Mat::from_fn(d, d, |i, j| effects[i].coords()[j]);
    if rank(&r, 1e-9) < d || rank(&e, 1e-9) < d {
        return Err(Error::InvalidInput("sampled set does not span".into()));
    }
    let stats = Mat::from_fn(d, d, |i, j| {
        let out = f.apply(&states[j]).expect("same algebra");
        effects[i].inner(&out).expect("same algebra")
    });
    rep.samples = d * d;
    let recovered = e.clone().try_inverse().ok_or(Error::Singular)? * stats * r.try_inverse().ok_or(Error::Singular)?;
    let dev = crate::linalg::max_abs_diff(&recovered, f.matrix());
    rep.notes.push(format!("reconstruction deviation {dev:.3e}"));
    if dev > 1e-9 {
        rep.fail([Witness::values("reconstruction deviation", vec![dev])]);
    }
    // a differing transformation is told apart by the same statistics
    let g = Channel::transpose(kind, n).as_linear_map()?;
    let differs = states.iter().any(|st| {
        let (x, y) = (f.apply(st).unwrap(), g.apply(st).unwrap());
        effects.iter().any(|ef| (ef.inner(&x).unwrap() - ef.inner(&y).unwrap()).abs() > 1e-9)
    });
    if !differs {
        rep.fail([Witness::values("indistinguishable maps", vec![])]);
    }
    rep.runtime_ms = start.elapsed_ms();
    Ok(rep)
}
