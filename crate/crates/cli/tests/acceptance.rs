//! One test per acceptance criterion; each prints a PASS/FAIL line with detail.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use opt_foundry::cone::{homogeneity_map, homogeneity_map_inverse, ConeContext, LinearMap};
use opt_foundry::dsl::{law_check, parse_circuit, print_program, run_circuit};
use opt_foundry::eja::{idempotent_class, make_algebra, quadratic_rep, Element, Family, IdempotentClass};
use opt_foundry::linalg::{cmax_abs_diff, to_complex, CMat};
use opt_foundry::purification::{
    complementary_state, pure_from_matrix, purify, steering_measurement, uniqueness_unitary, zigzag_gamma,
    zigzag_pair, Factor,
};
use opt_foundry::report::Format;
use opt_foundry::sample::{self, gaussian_element};
use opt_foundry::theory::{random_resolution, BackendKind, SystemRef, TheoryBackend};
use opt_foundry_cli::{run_command, Command, RunConfig};

type Outcome = Result<String, String>;

const QUANTUM: [BackendKind; 2] = [BackendKind::RealQT, BackendKind::ComplexQT];
const CASES: usize = 100;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn config(command: Command, levels: Vec<usize>, format: Format) -> RunConfig {
    RunConfig {
        command,
        backend: None,
        levels,
        samples: 50,
        seed: 2024,
        tol: None,
        format,
        out: None,
        timing: false,
    }
}

fn circuits() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../circuits")
}

fn postulate_table() -> Outcome {
    let start = Instant::now();
    let out = run_command(&config(Command::CheckPostulates, vec![2, 3], Format::Markdown)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.exit_code() == 0, || format!("exit {}: {:?}", out.exit_code(), out.report.notes))?;
    for row in [
        "| Classical theory | ✓ | ✗ |",
        "| Real quantum theory | ✗ | ✓ |",
        "| Complex quantum theory | ✓ | ✓ |",
    ] {
        ensure(out.text.contains(row), || format!("missing row {row}"))?;
    }
    let labels: Vec<&str> = out.report.witnesses.iter().map(|w| w.label.as_str()).collect();
    let classical = out
        .report
        .witnesses
        .iter()
        .find(|w| w.label.starts_with("classical/es_purification"))
        .ok_or("no classical witness")?;
    let nonzero = classical.coords.iter().filter(|c| c.abs() > 1e-12).count();
    ensure(nonzero > 1, || "classical witness is not mixed".into())?;
    for l in ["real/local_equivalence/rho_plus", "real/local_equivalence/rho_minus"] {
        ensure(labels.contains(&l), || format!("missing witness {l}"))?;
    }
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("table matches, witnesses present, {:.1} s", elapsed.as_secs_f64()))
}

fn classification_sweep() -> Outcome {
    let start = Instant::now();
    let out = run_command(&config(Command::Classify { ns: (2..=6).collect() }, vec![], Format::Json))
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.report.passed(), || "report failed".into())?;
    let json: serde_json::Value = serde_json::from_str(&out.text).map_err(|e| e.to_string())?;
    let records = json["records"].as_array().ok_or("no records")?;
    for n in 2..=6u64 {
        let survivors: Vec<&str> = records
            .iter()
            .filter(|r| r["n_a"] == n && r["excluded"] == false)
            .map(|r| r["candidate"].as_str().unwrap())
            .collect();
        let want = Family::ComplexHerm(n as usize).to_string();
        ensure(survivors == [want.as_str()], || format!("n = {n}: survivors {survivors:?}"))?;
    }
    let oct = records.iter().find(|r| r["candidate"] == "OctHerm3").ok_or("no OctHerm3 record")?;
    ensure(
        oct["n_a"] == 3
            && oct["composite_rank"] == 9
            && oct["composite_dim"] == 729
            && oct["rank9_dims"] == serde_json::json!([45, 81, 153])
            && oct["excluded"] == true,
        || format!("octonion record {oct}"),
    )?;
    let spins: Vec<_> = records
        .iter()
        .filter(|r| r["candidate"].as_str().unwrap().starts_with("Spin"))
        .collect();
    ensure(!spins.is_empty(), || "no spin records".into())?;
    for s in &spins {
        ensure(s["n_a"] == 2 && s["rank4_dims"] == serde_json::json!([10, 16, 28]), || format!("spin record {s}"))?;
    }
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("{} records, {} spin, {elapsed:?}", records.len(), spins.len()))
}

fn eja_table() -> Outcome {
    let mut rows = Vec::new();
    for r in 1..=8 {
        rows.push((Family::RealSym(r), r, r * (r + 1) / 2));
        rows.push((Family::ComplexHerm(r), r, r * r));
        rows.push((Family::QuatHerm(r), r, r * (2 * r - 1)));
    }
    for d in 2..=12 {
        rows.push((Family::Spin(d), 2, d));
    }
    rows.push((Family::OctHerm3, 3, 27));
    let mut rng = sample::seeded(3);
    for (f, r, d) in &rows {
        let a = make_algebra(f.clone()).map_err(|e| e.to_string())?;
        // rank: size of the Jordan frame of a generic element
        let rank = if a.has_spectral_support() {
            let frame = gaussian_element(&a, &mut rng).spectral().map_err(|e| e.to_string())?.frame;
            ensure(
                frame.iter().all(|p| idempotent_class(p, 1e-8) == IdempotentClass::PrimitiveIdempotent),
                || format!("{f}: frame not primitive"),
            )?;
            frame.len()
        } else {
            a.rank()
        };
        let dim = a.gram().nrows();
        ensure((rank, dim) == (*r, *d), || format!("{f}: computed ({rank}, {dim}), table ({r}, {d})"))?;
    }
    Ok(format!("{} families", rows.len()))
}

fn dimension_identities() -> Outcome {
    let mut checked = 0;
    for kind in [BackendKind::Classical, BackendKind::ComplexQT] {
        let tb = TheoryBackend::new(kind);
        for a in 1..=4 {
            for b in 1..=4 {
                let (sa, sb) = (SystemRef::new(kind, a), SystemRef::new(kind, b));
                let rep = tb.dimension_identity_check(sa, sb).map_err(|e| e.to_string())?;
                ensure(rep.passed(), || format!("{kind} ({a}, {b}): {:?}", rep.notes))?;
                let comp = tb.compose_systems(sa, sb).map_err(|e| e.to_string())?;
                let frame = tb.informational_dimension(comp.system).map_err(|e| e.to_string())?;
                ensure(frame.n == a * b, || format!("{kind} ({a}, {b}): n_AB = {}", frame.n))?;
                checked += 1;
            }
        }
    }
    let tb = TheoryBackend::new(BackendKind::RealQT);
    let s = SystemRef::new(BackendKind::RealQT, 2);
    let rep = tb.dimension_identity_check(s, s).map_err(|e| e.to_string())?;
    let w = rep.witnesses.first().ok_or("real (2, 2) passed")?;
    ensure(!rep.passed() && w.coords == [10.0, 9.0], || format!("real (2, 2): {:?}", w.coords))?;
    Ok(format!("{checked} pairs pass; real (2, 2) gives 10 vs 9"))
}

fn property_suites() -> Outcome {
    let start = Instant::now();
    let families = [
        Family::RealSym(3),
        Family::ComplexHerm(3),
        Family::QuatHerm(3),
        Family::Spin(5),
        Family::OctHerm3,
        Family::DirectSum(vec![Family::ComplexHerm(2), Family::Spin(4)]),
    ];
    let algs: Vec<_> = families.iter().map(|f| make_algebra(f.clone()).unwrap()).collect();
    let spectral: Vec<_> = algs.iter().filter(|a| a.has_spectral_support()).cloned().collect();
    let mut rng = sample::seeded(2024);
    let err = |e: opt_foundry::Error| e.to_string();

    for _ in 0..CASES {
        for a in &algs {
            let (x, y, z) = (gaussian_element(a, &mut rng), gaussian_element(a, &mut rng), gaussian_element(a, &mut rng));
            let s = (1.0 + x.norm()).powi(3) * (1.0 + y.norm()) * (1.0 + z.norm());
            let xy = x.jordan(&y).map_err(err)?;
            let x2 = x.square();
            let jordan = x.jordan(&x2.jordan(&y).map_err(err)?).map_err(err)?.dist(&x2.jordan(&xy).map_err(err)?);
            let assoc = (xy.inner(&z).map_err(err)? - y.inner(&x.jordan(&z).map_err(err)?).map_err(err)?).abs();
            let comm = xy.dist(&y.jordan(&x).map_err(err)?);
            ensure(jordan.max(assoc).max(comm) <= 1e-9 * s, || format!("{}: axioms", a.family()))?;
        }
        for a in &spectral {
            let x = gaussian_element(a, &mut rng);
            let sd = x.spectral().map_err(err)?;
            ensure(sd.reconstruct().dist(&x) <= 1e-8 * (1.0 + x.norm()), || format!("{}: reconstruction", a.family()))?;

            // orthogonality on the cone, both directions
            let frame = sd.frame;
            let mut p = Element::zero(a);
            let mut q = Element::zero(a);
            for (i, f) in frame.iter().enumerate() {
                let w = 0.1 + sample::gaussian(&mut rng).abs();
                if i < frame.len() / 2 { p = &p + &f.scale(w) } else { q = &q + &f.scale(w) }
            }
            let ortho = p.inner(&q).map_err(err)?.abs() <= 1e-9 && p.jordan(&q).map_err(err)?.norm() <= 1e-9;
            let (u, v) = (sample::cone_element(a, &mut rng), sample::cone_element(a, &mut rng));
            let generic = (u.inner(&v).map_err(err)?.abs() <= 1e-12) == (u.jordan(&v).map_err(err)?.norm() <= 1e-12);
            ensure(ortho && generic, || format!("{}: orthogonality", a.family()))?;

            // spectra of G(χ) and G†(χ)
            let y = sample::random_internal_state(a, &mut rng);
            let h = sample::random_automorphism(a, &mut rng).map_err(err)?;
            let g = LinearMap::from_fn(a, a, |z| quadratic_rep(&y, z)).map_err(err)?.compose(&h).map_err(err)?;
            let chi = Element::unit(a).scale(1.0 / a.rank() as f64);
            let s1 = g.apply(&chi).map_err(err)?.spectral().map_err(err)?.eigenvalues;
            let s2 = g.adjoint().apply(&chi).map_err(err)?.spectral().map_err(err)?.eigenvalues;
            ensure(s1.iter().zip(&s2).all(|(l, m)| (l - m).abs() <= 1e-7), || format!("{}: adjoint spectrum", a.family()))?;

            let ctx = ConeContext::with_default_tol(a);
            let (tau, rho) = (sample::random_internal_state(a, &mut rng), sample::random_internal_state(a, &mut rng));
            let gm = homogeneity_map(&ctx, &tau, &rho).map_err(err)?;
            let inv = homogeneity_map_inverse(&ctx, &tau, &rho).map_err(err)?;
            let id_dev = gm.compose(&inv).map_err(err)?.max_diff(&LinearMap::identity(a));
            ensure(gm.apply(&tau).map_err(err)?.max_diff(&rho) <= 1e-8 && id_dev <= 1e-7, || {
                format!("{}: homogeneity", a.family())
            })?;
        }
    }

    for kind in QUANTUM {
        for n in 1..=3 {
            let alg = kind.algebra(n).map_err(err)?;
            for i in 0..CASES {
                let rho = sample::random_internal_state(&alg, &mut rng);
                let pair = purify(kind, &rho).map_err(err)?;
                ensure(pair.marginal(Factor::First).map_err(err)?.max_diff(&rho) <= 1e-9, || "marginal".into())?;
                let comp = complementary_state(&pair).map_err(err)?;
                ensure(comp.min_eigenvalue().map_err(err)? > 0.0, || "complementary not internal".into())?;

                let meas = random_resolution(&alg, 1 + i % 4, &mut rng).map_err(err)?;
                let root = rho.map_spectrum(f64::sqrt).map_err(err)?;
                let ensemble: Vec<Element> = meas.iter().map(|b| quadratic_rep(&root, b).unwrap()).collect();
                let res = steering_measurement(&pair, &ensemble).map_err(err)?;
                let sum = res.effects.iter().fold(Element::zero(&alg), |acc, b| &acc + b);
                ensure(res.max_residual <= 1e-8 && sum.max_diff(&Element::unit(&alg)) <= 1e-10, || {
                    format!("{kind} level {n}: steering")
                })?;

                let zz = zigzag_pair(kind, &rho).map_err(err)?;
                ensure(zz.residuals.iter().all(|r| *r <= 1e-8), || format!("{kind} level {n}: snakes"))?;

                let u = match kind {
                    BackendKind::RealQT => to_complex(&sample::random_orthogonal(n, &mut rng)),
                    _ => sample::random_unitary(n, &mut rng),
                };
                let other = pure_from_matrix(kind, &(&pair.m * u.transpose())).map_err(err)?;
                let un = uniqueness_unitary(kind, &pair.psi, &other).map_err(err)?;
                let lifted = CMat::identity(n, n).kronecker(&un.v);
                let moved = &lifted * pair.psi.to_cmat().map_err(err)? * lifted.adjoint();
                ensure(cmax_abs_diff(&moved, &other.to_cmat().map_err(err)?) <= 1e-8, || {
                    format!("{kind} level {n}: uniqueness")
                })?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!("{CASES} cases per property, {:.1} s", elapsed.as_secs_f64()))
}

fn cross_construction() -> Outcome {
    let mut rng = sample::seeded(6);
    let mut worst = 0.0f64;
    for kind in QUANTUM {
        for n in 1..=3 {
            let alg = kind.algebra(n).map_err(|e| e.to_string())?;
            let ctx = ConeContext::with_default_tol(&alg);
            for _ in 0..20 {
                let tau = sample::random_internal_state(&alg, &mut rng);
                let rho = sample::random_internal_state(&alg, &mut rng);
                let zig = zigzag_gamma(kind, &tau, &rho).map_err(|e| e.to_string())?;
                let quad = homogeneity_map(&ctx, &tau, &rho).map_err(|e| e.to_string())?;
                worst = worst.max(zig.max_diff(&quad));
            }
        }
    }
    ensure(worst <= 1e-7, || format!("worst deviation {worst:.3e}"))?;
    Ok(format!("worst deviation {worst:.3e}"))
}

fn dsl() -> Outcome {
    for kind in BackendKind::ALL {
        let rep = law_check(kind, 50, 2024).map_err(|e| e.to_string())?;
        ensure(rep.passed(), || format!("{kind}: {:?}", rep.witnesses))?;
    }
    let mut files: Vec<_> = std::fs::read_dir(circuits())
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "optc"))
        .collect();
    files.sort();
    ensure(files.len() == 20, || format!("{} corpus files", files.len()))?;
    for f in &files {
        let src = std::fs::read_to_string(f).map_err(|e| e.to_string())?;
        let ast = parse_circuit(&src).map_err(|e| format!("{}: {e}", f.display()))?;
        let again = parse_circuit(&print_program(&ast)).map_err(|e| e.to_string())?;
        ensure(again == ast, || format!("{}: round trip", f.display()))?;
    }
    let src = std::fs::read_to_string(circuits().join("bell.optc")).map_err(|e| e.to_string())?;
    let json = std::fs::read_to_string(circuits().join("bell.json")).map_err(|e| e.to_string())?;
    let ev = run_circuit(&src, BackendKind::ComplexQT, &json).map_err(|e| e.to_string())?;
    let p = ev.get("p").and_then(|v| v.scalar()).ok_or("no scalar p")?;
    ensure((p - 0.5).abs() <= 1e-10, || format!("bell probability {p}"))?;
    Ok(format!("laws hold on 3 x 50 instances, 20 files round-trip, bell p = {p}"))
}

fn run(n: usize, name: &str, f: fn() -> Outcome) {
    match f() {
        Ok(detail) => println!("criterion {n}: PASS {name}: {detail}"),
        Err(why) => {
            println!("criterion {n}: FAIL {name}: {why}");
            panic!("criterion {n} failed: {why}");
        }
    }
}

#[test]
fn criterion_1_postulate_table() {
    run(1, "postulate table", postulate_table);
}

#[test]
fn criterion_2_classification_sweep() {
    run(2, "classification sweep", classification_sweep);
}

#[test]
fn criterion_3_rank_dimension_table() {
    run(3, "EJA rank/dimension table", eja_table);
}

#[test]
fn criterion_4_dimension_identities() {
    run(4, "dimension identities", dimension_identities);
}

#[test]
fn criterion_5_property_suites() {
    run(5, "property suites", property_suites);
}

#[test]
fn criterion_6_zigzag_vs_quadratic_homogeneity() {
    run(6, "zigzag vs quadratic homogeneity", cross_construction);
}

#[test]
fn criterion_7_circuit_language() {
    run(7, "circuit language", dsl);
}
