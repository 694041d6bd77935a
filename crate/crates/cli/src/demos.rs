use opt_foundry::dsl::run_circuit;
use opt_foundry::eja::{quadratic_rep, Element};
use opt_foundry::purification::{
    complementary_state, purification_exists, purify, steering_measurement, zigzag_pair, Factor,
};
use opt_foundry::report::{CheckReport, Witness};
use opt_foundry::sample;
use opt_foundry::theory::{random_resolution, BackendKind};
use opt_foundry::{Error, Result};

const PURIFY_TOL: f64 = 1e-8;
const UNIT_TOL: f64 = 1e-10;

fn demo_report(check: &str, kind: BackendKind, levels: &[usize], samples: usize, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new(check);
    rep.backend = Some(kind.name().into());
    rep.levels = levels.to_vec();
    rep.seed = Some(seed);
    rep.samples = samples * levels.len();
    rep
}

/// Purify random internal states; check the marginal, the complementary
/// state and both snake equations.
pub fn purify_report(
    kind: BackendKind,
    levels: &[usize],
    samples: usize,
    seed: u64,
    tol: Option<f64>,
) -> Result<CheckReport> {
    let tol = tol.unwrap_or(PURIFY_TOL);
    let mut rep = demo_report("purify", kind, levels, samples, seed)
        .with_tol("marginal", tol)
        .with_tol("snake", tol);
    let mut rng = sample::seeded(seed);
    let (mut marg, mut snake, mut comp_min) = (0.0f64, 0.0f64, f64::INFINITY);
    for &n in levels {
        let alg = kind.algebra(n)?;
        for i in 0..samples {
            let rho = sample::random_internal_state(&alg, &mut rng);
            if !purification_exists(kind, &rho) {
                rep.fail([Witness::element(format!("level {n}: unpurifiable_state"), &rho)]);
                break;
            }
            let pair = purify(kind, &rho)?;
            let m = pair.marginal(Factor::First)?.max_diff(&rho);
            let c = complementary_state(&pair)?.min_eigenvalue()?;
            let zz = zigzag_pair(kind, &rho)?;
            let s = zz.residuals[0].max(zz.residuals[1]);
            if m > tol || s > tol || c <= 0.0 {
                rep.fail([Witness::element(format!("level {n} sample {i}"), &rho)]);
            }
            marg = marg.max(m);
            snake = snake.max(s);
            comp_min = comp_min.min(c);
        }
    }
    if kind == BackendKind::Classical {
        rep.notes.push("mixed classical states have no pure extension".into());
    } else {
        rep.notes.push(format!("worst marginal residual {marg:.3e}"));
        rep.notes.push(format!("worst snake residual {snake:.3e}"));
        rep.notes.push(format!("smallest complementary eigenvalue {comp_min:.3e}"));
    }
    Ok(rep)
}

/// Split random states into random ensembles `σ_i = P_{√ρ} b_i` and steer
/// each through the canonical purification.
pub fn steer_report(
    kind: BackendKind,
    levels: &[usize],
    samples: usize,
    outcomes: usize,
    seed: u64,
    tol: Option<f64>,
) -> Result<CheckReport> {
    if outcomes == 0 {
        return Err(Error::InvalidParameter("at least one outcome required".into()));
    }
    let (steer_tol, unit_tol) = (tol.unwrap_or(PURIFY_TOL), tol.unwrap_or(UNIT_TOL));
    let mut rep = demo_report("steer", kind, levels, samples, seed)
        .with_tol("steering", steer_tol)
        .with_tol("unit", unit_tol);
    let mut rng = sample::seeded(seed);
    let (mut worst, mut unit_dev) = (0.0f64, 0.0f64);
    for &n in levels {
        let alg = kind.algebra(n)?;
        for i in 0..samples {
            let rho = sample::random_state(&alg, &mut rng);
            if !purification_exists(kind, &rho) {
                rep.fail([Witness::element(format!("level {n}: unpurifiable_state"), &rho)]);
                break;
            }
            let root = rho.map_spectrum(|l| l.max(0.0).sqrt())?;
            let ensemble = random_resolution(&alg, outcomes, &mut rng)?
                .iter()
                .map(|b| quadratic_rep(&root, b))
                .collect::<Result<Vec<_>>>()?;
            let res = steering_measurement(&purify(kind, &rho)?, &ensemble)?;
            let sum = res.effects.iter().fold(Element::zero(&alg), |acc, b| &acc + b);
            let u = sum.max_diff(&Element::unit(&alg));
            if res.max_residual > steer_tol || u > unit_tol {
                rep.fail([Witness::element(format!("level {n} sample {i}"), &rho)]);
            }
            worst = worst.max(res.max_residual);
            unit_dev = unit_dev.max(u);
        }
    }
    if kind != BackendKind::Classical {
        rep.notes.push(format!("worst steering residual {worst:.3e}"));
        rep.notes.push(format!("worst deviation of the effects from the unit {unit_dev:.3e}"));
    }
    Ok(rep)
}

/// Evaluate a circuit; scalars are listed in the notes. Located language
/// errors become a failing report whose witness is `[line, column]`.
pub fn circuit_report(source: &str, kind: BackendKind, bindings_json: &str) -> Result<CheckReport> {
    let mut rep = CheckReport::new("circuit_eval");
    rep.backend = Some(kind.name().into());
    match run_circuit(source, kind, bindings_json) {
        Ok(ev) => {
            rep.samples = ev.values.len();
            for (name, v) in &ev.values {
                match v.scalar() {
                    Some(p) => rep.notes.push(format!("{name} = {p:.12}")),
                    None => rep.notes.push(format!(
                        "{name} : {} ({}x{} wire matrix)",
                        v.wire,
                        v.matrix.nrows(),
                        v.matrix.ncols()
                    )),
                }
            }
        }
        Err(
            e @ (Error::Syntax { line, column, .. }
            | Error::DuplicateDeclaration { line, column, .. }
            | Error::UnknownName { line, column, .. }
            | Error::WireMismatch { line, column, .. }),
        ) => {
            rep.fail([Witness::values(e.to_string(), vec![line as f64, column as f64])]);
        }
        Err(e) => return Err(e),
    }
    Ok(rep)
}
