use num_complex::Complex64;
use rand::Rng;

use super::eval::{kraus_value, Bindings, Evaluator, Value};
use super::typecheck::{typecheck, Registry, WireType};
use super::parse_circuit;
use crate::error::Result;
use crate::linalg::{max_abs_diff, CMat, Mat};
use crate::report::{CheckReport, Stopwatch, Witness};
use crate::sample::{self, SeededRng};
use crate::theory::BackendKind;

pub const LAW_TOL: f64 = 1e-10;

const LAWS: [(&str, &str, &str); 5] = [
    ("interchange", "int_l", "int_r"),
    ("serial_associativity", "ser_l", "ser_r"),
    ("parallel_associativity", "par_l", "par_r"),
    ("left_unit", "unit_l", "f"),
    ("right_unit", "unit_r", "f"),
];

const BODY: &str = "\
let int_l = (g x g2) . (f x f2);
let int_r = (g . f) x (g2 . f2);
let ser_l = (h . g) . f;
let ser_r = h . (g . f);
let par_l = (f x f2) x h;
let par_r = f x (f2 x h);
let unit_l = id[B] . f;
let unit_r = f . id[A];
";

/// Random channel `in → out`: normalized Kraus pair for quantum backends,
/// column-stochastic matrix for the classical one.
pub fn random_channel(
    kind: BackendKind,
    input: (&str, usize),
    output: (&str, usize),
    rng: &mut SeededRng,
) -> Result<Value> {
    let wire = WireType::new(vec![input.0.into()], vec![output.0.into()]);
    let (ni, no) = (input.1, output.1);
    if kind == BackendKind::Classical {
        let mut m = Mat::from_fn(no, ni, |_, _| rng.random::<f64>());
        for mut col in m.column_iter_mut() {
            let s: f64 = col.sum();
            col /= s;
        }
        return Ok(Value { wire, matrix: m });
    }
    let entry = |rng: &mut SeededRng| {
        let im = if kind == BackendKind::ComplexQT { sample::gaussian(rng) } else { 0.0 };
        Complex64::new(sample::gaussian(rng), im)
    };
    let a: Vec<CMat> = (0..2).map(|_| CMat::from_fn(no, ni, |_, _| entry(rng))).collect();
    let s = a.iter().fold(CMat::zeros(ni, ni), |acc, k| acc + k.adjoint() * k);
    let s_inv_sqrt = crate::linalg::herm_apply(&s, |l| 1.0 / l.sqrt());
    let mut kraus: Vec<CMat> = a.iter().map(|k| k * &s_inv_sqrt).collect();
    if kind == BackendKind::RealQT {
        for k in &mut kraus {
            *k = k.map(|z| Complex64::new(z.re, 0.0));
        }
    }
    kraus_value(kind, wire.inputs, wire.outputs, &[ni], &[no], &kraus)
}

/// Source text and bindings of one random law instance.
pub fn law_instance(kind: BackendKind, rng: &mut SeededRng) -> Result<(String, Bindings)> {
    let names = ["A", "B", "C", "A2", "B2", "C2"];
    let levels: Vec<usize> = names.iter().map(|_| rng.random_range(1..=3)).collect();
    let lv = |s: &str| levels[names.iter().position(|n| *n == s).unwrap()];
    let mut src = String::new();
    for (n, l) in names.iter().zip(&levels) {
        src.push_str(&format!("system {n} = {l};\n"));
    }
    src.push_str(BODY);
    let mut b = Bindings::new();
    for (name, i, o) in [("f", "A", "B"), ("g", "B", "C"), ("h", "C", "A"), ("f2", "A2", "B2"), ("g2", "B2", "C2")] {
        b.insert(name, random_channel(kind, (i, lv(i)), (o, lv(o)), rng)?);
    }
    Ok((src, b))
}

/// Monoidal laws checked on evaluator output for random channels at
/// levels up to 3.
pub fn law_check(kind: BackendKind, n_instances: usize, seed: u64) -> Result<CheckReport> {
    law_check_with(&Evaluator::new(kind), n_instances, seed, LAW_TOL)
}

pub fn law_check_with(ev: &Evaluator, n_instances: usize, seed: u64, tol: f64) -> Result<CheckReport> {
    let start = Stopwatch::start();
    let kind = ev.kind();
    let mut rng = sample::seeded(seed);
    let mut rep = CheckReport::new("law_check").with_tol("law", tol);
    rep.backend = Some(kind.name().into());
    rep.seed = Some(seed);
    rep.samples = n_instances;
    rep.levels = vec![1, 2, 3];
    let mut worst = [0.0f64; LAWS.len()];
    for i in 0..n_instances {
        let (src, bindings) = law_instance(kind, &mut rng)?;
        let prog = parse_circuit(&src)?;
        let reg = bindings.registry(&Registry::from_program(&prog).systems);
        let typed = typecheck(&prog, &reg)?;
        let mut out = ev.evaluate(&typed, &bindings)?;
        out.values.push(("f".into(), bindings.values["f"].clone()));
        for (k, (law, lhs, rhs)) in LAWS.iter().enumerate() {
            let (l, r) = (&out.get(lhs).unwrap().matrix, &out.get(rhs).unwrap().matrix);
            let dev = if l.shape() == r.shape() { max_abs_diff(l, r) } else { f64::INFINITY };
            if dev > tol && worst[k] <= tol {
                rep.fail([Witness::values(format!("{law} instance {i}"), vec![dev])]);
            }
            worst[k] = worst[k].max(dev);
        }
    }
    for ((law, _, _), w) in LAWS.iter().zip(worst) {
        rep.notes.push(format!("{law}: worst deviation {w:.3e}"));
    }
    rep.runtime_ms = start.elapsed_ms();
    Ok(rep)
}
