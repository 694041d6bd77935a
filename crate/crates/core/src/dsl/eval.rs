use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::Deserialize;

use super::typecheck::{Registry, TypedExpr, TypedNode, TypedProgram, WireType};
use crate::eja::Element;
use crate::error::{Error, Result};
use crate::linalg::{CMat, Mat};
use crate::theory::BackendKind;

/// A box evaluated to a real matrix on process-space coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Value {
    pub wire: WireType,
    pub matrix: Mat,
}

impl Value {
    pub fn scalar(&self) -> Option<f64> {
        self.wire.is_scalar().then(|| self.matrix[(0, 0)])
    }

    /// A state on a single system as an algebra element.
    pub fn to_element(&self, kind: BackendKind, systems: &BTreeMap<String, usize>) -> Result<Element> {
        if !self.wire.inputs.is_empty() {
            return Err(Error::Binding(format!("`{}` is not a state", self.wire)));
        }
        let levels = self
            .wire
            .outputs
            .iter()
            .map(|s| systems.get(s).copied().ok_or_else(|| Error::Binding(format!("undeclared system `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        let coords: Vec<f64> = self.matrix.column(0).iter().copied().collect();
        let op = kind.wire_to_operator(&levels, &coords);
        Element::from_cmat(&kind.algebra(levels.iter().product())?, &op)
    }
}

/// Named primitives bound to backend objects.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    pub values: HashMap<String, Value>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Systems {
    One(String),
    Many(Vec<String>),
}

impl Systems {
    fn list(self) -> Vec<String> {
        match self {
            Systems::One(s) => vec![s],
            Systems::Many(v) => v,
        }
    }
}

/// A matrix entry: a real number or `[re, im]`.
#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Re(f64),
    Complex([f64; 2]),
}

type MatrixSpec = Vec<Vec<Entry>>;

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Spec {
    State {
        system: Systems,
        matrix: Option<MatrixSpec>,
        coords: Option<Vec<f64>>,
    },
    Effect {
        system: Systems,
        matrix: Option<MatrixSpec>,
        coords: Option<Vec<f64>>,
    },
    Channel {
        input: Systems,
        output: Systems,
        kraus: Vec<MatrixSpec>,
    },
    /// Raw matrix on process-space coordinates.
    Map {
        input: Systems,
        output: Systems,
        matrix: Vec<Vec<f64>>,
    },
    Swap {
        systems: [String; 2],
    },
    Scalar {
        value: f64,
    },
}

fn to_cmat(kind: BackendKind, rows: MatrixSpec) -> Result<CMat> {
    let n = rows.len();
    let mut m = CMat::zeros(n, rows.first().map_or(0, Vec::len));
    for (i, row) in rows.into_iter().enumerate() {
        if row.len() != m.ncols() {
            return Err(Error::Binding("ragged matrix".into()));
        }
        for (j, e) in row.into_iter().enumerate() {
            m[(i, j)] = match e {
                Entry::Re(x) => Complex64::new(x, 0.0),
                Entry::Complex([re, im]) => {
                    if im != 0.0 && kind != BackendKind::ComplexQT {
                        return Err(Error::Binding(format!("complex entry in a {} binding", kind.name())));
                    }
                    Complex64::new(re, im)
                }
            };
        }
    }
    Ok(m)
}

/// Tabulate an operator map between system lists on process coordinates.
pub fn tabulate(
    kind: BackendKind,
    in_levels: &[usize],
    out_levels: &[usize],
    f: impl Fn(&CMat) -> CMat,
) -> Result<Mat> {
    let cols = kind.wire_dim_of(in_levels);
    let rows = kind.wire_dim_of(out_levels);
    let out_order: usize = out_levels.iter().product();
    let mut m = Mat::zeros(rows, cols);
    for c in 0..cols {
        let mut unit = vec![Complex64::new(0.0, 0.0); cols];
        unit[c] = Complex64::new(1.0, 0.0);
        let basis = kind.wire_to_operator_complex(in_levels, &unit);
        let y = f(&basis);
        if y.nrows() != out_order || y.ncols() != out_order {
            return Err(Error::Binding(format!(
                "operator of order {} where {} was expected",
                y.nrows(),
                out_order
            )));
        }
        for (r, v) in kind.operator_to_wire(out_levels, &y).into_iter().enumerate() {
            m[(r, c)] = v;
        }
    }
    Ok(m)
}

/// Process coordinates of a state operator (column) or effect operator (row).
pub fn state_value(kind: BackendKind, systems: Vec<String>, levels: &[usize], rho: &CMat) -> Result<Value> {
    check_order(levels, rho)?;
    let v = kind.operator_to_wire(levels, rho);
    Ok(Value {
        wire: WireType::new(vec![], systems),
        matrix: Mat::from_column_slice(v.len(), 1, &v),
    })
}

/// The row `c ↦ tr(a B_c)`, so that the effect pairs with states by the dot product.
pub fn effect_value(kind: BackendKind, systems: Vec<String>, levels: &[usize], a: &CMat) -> Result<Value> {
    check_order(levels, a)?;
    let z = kind.operator_to_wire_complex(levels, &a.adjoint());
    let row: Vec<f64> = z.iter().map(|z| z.re).collect();
    Ok(Value {
        wire: WireType::new(systems, vec![]),
        matrix: Mat::from_row_slice(1, row.len(), &row),
    })
}

pub fn kraus_value(
    kind: BackendKind,
    inputs: Vec<String>,
    outputs: Vec<String>,
    in_levels: &[usize],
    out_levels: &[usize],
    kraus: &[CMat],
) -> Result<Value> {
    let (ni, no): (usize, usize) = (in_levels.iter().product(), out_levels.iter().product());
    for k in kraus {
        if k.shape() != (no, ni) {
            return Err(Error::Binding(format!(
                "Kraus operator of shape {:?}, expected ({no}, {ni})",
                k.shape()
            )));
        }
    }
    let matrix = tabulate(kind, in_levels, out_levels, |x| {
        kraus.iter().fold(CMat::zeros(no, no), |acc, k| acc + k * x * k.adjoint())
    })?;
    Ok(Value {
        wire: WireType::new(inputs, outputs),
        matrix,
    })
}

/// The reversible channel exchanging two systems.
pub fn swap_value(kind: BackendKind, a: (&str, usize), b: (&str, usize)) -> Result<Value> {
    let (na, nb) = (a.1, b.1);
    let p = CMat::from_fn(na * nb, na * nb, |r, c| {
        // |j⟩|i⟩ ← |i⟩|j⟩
        let (i, j) = (c / nb, c % nb);
        if r == j * na + i {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let matrix = tabulate(kind, &[na, nb], &[nb, na], |x| &p * x * p.adjoint())?;
    Ok(Value {
        wire: WireType::new(vec![a.0.into(), b.0.into()], vec![b.0.into(), a.0.into()]),
        matrix,
    })
}

fn check_order(levels: &[usize], m: &CMat) -> Result<()> {
    let n: usize = levels.iter().product();
    if m.shape() != (n, n) {
        return Err(Error::Binding(format!("matrix of shape {:?}, expected ({n}, {n})", m.shape())));
    }
    Ok(())
}

impl Bindings {
    pub fn new() -> Bindings {
        Bindings::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, value: Value) {
        self.values.insert(name.into(), value);
    }

    /// Parse a JSON manifest mapping names to state, effect, channel, map,
    /// swap or scalar descriptions over the systems of `systems`.
    pub fn from_json(json: &str, kind: BackendKind, systems: &BTreeMap<String, usize>) -> Result<Bindings> {
        let raw: BTreeMap<String, serde_json::Value> =
            serde_json::from_str(json).map_err(|e| Error::Binding(e.to_string()))?;
        let reg = Registry {
            systems: systems.clone(),
            primitives: HashMap::new(),
        };
        let mut out = Bindings::new();
        for (name, v) in raw {
            let spec: Spec =
                serde_json::from_value(v).map_err(|e| Error::Binding(format!("`{name}`: {e}")))?;
            let value = build(kind, &reg, spec).map_err(|e| match e {
                Error::Binding(m) => Error::Binding(format!("`{name}`: {m}")),
                other => other,
            })?;
            out.insert(name, value);
        }
        Ok(out)
    }

    pub fn registry(&self, systems: &BTreeMap<String, usize>) -> Registry {
        Registry {
            systems: systems.clone(),
            primitives: self.values.iter().map(|(k, v)| (k.clone(), v.wire.clone())).collect(),
        }
    }
}

fn operator(
    kind: BackendKind,
    levels: &[usize],
    matrix: Option<MatrixSpec>,
    coords: Option<Vec<f64>>,
) -> Result<CMat> {
    match (matrix, coords) {
        (Some(m), None) => to_cmat(kind, m),
        (None, Some(c)) => {
            let alg = kind.algebra(levels.iter().product())?;
            Element::new(&alg, c)?.to_cmat()
        }
        _ => Err(Error::Binding("give exactly one of `matrix` and `coords`".into())),
    }
}

fn build(kind: BackendKind, reg: &Registry, spec: Spec) -> Result<Value> {
    match spec {
        Spec::State { system, matrix, coords } => {
            let sys = system.list();
            let levels = reg.levels(&sys)?;
            let op = operator(kind, &levels, matrix, coords)?;
            state_value(kind, sys, &levels, &op)
        }
        Spec::Effect { system, matrix, coords } => {
            let sys = system.list();
            let levels = reg.levels(&sys)?;
            let op = operator(kind, &levels, matrix, coords)?;
            effect_value(kind, sys, &levels, &op)
        }
        Spec::Channel { input, output, kraus } => {
            let (i, o) = (input.list(), output.list());
            let (li, lo) = (reg.levels(&i)?, reg.levels(&o)?);
            let ks = kraus.into_iter().map(|k| to_cmat(kind, k)).collect::<Result<Vec<_>>>()?;
            kraus_value(kind, i, o, &li, &lo, &ks)
        }
        Spec::Map { input, output, matrix } => {
            let (i, o) = (input.list(), output.list());
            let (li, lo) = (reg.levels(&i)?, reg.levels(&o)?);
            let (r, c) = (kind.wire_dim_of(&lo), kind.wire_dim_of(&li));
            if matrix.len() != r || matrix.iter().any(|row| row.len() != c) {
                return Err(Error::Binding(format!("map matrix must be {r}x{c}")));
            }
            Ok(Value {
                wire: WireType::new(i, o),
                matrix: Mat::from_fn(r, c, |a, b| matrix[a][b]),
            })
        }
        Spec::Swap { systems: [a, b] } => {
            let (la, lb) = (reg.levels(std::slice::from_ref(&a))?[0], reg.levels(std::slice::from_ref(&b))?[0]);
            swap_value(kind, (&a, la), (&b, lb))
        }
        Spec::Scalar { value } => Ok(Value {
            wire: WireType::new(vec![], vec![]),
            matrix: Mat::from_element(1, 1, value),
        }),
    }
}

pub type TensorFn = dyn Fn(&Mat, &Mat) -> Mat + Send + Sync;

fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

/// Evaluates typed circuits: serial composition is matrix product, parallel
/// composition is the (replaceable) tensor product, sums add.
pub struct Evaluator {
    kind: BackendKind,
    tensor: Box<TensorFn>,
}

/// Values of every `let`, in declaration order.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub values: Vec<(String, Value)>,
}

impl Evaluation {
    pub fn get(&self, name: &str) -> Option<&Value> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

impl Evaluator {
    pub fn new(kind: BackendKind) -> Evaluator {
        Evaluator {
            kind,
            tensor: Box::new(kron),
        }
    }

    pub fn with_tensor(kind: BackendKind, tensor: Box<TensorFn>) -> Evaluator {
        Evaluator { kind, tensor }
    }

    pub fn kind(&self) -> BackendKind {
        self.kind
    }

    pub fn evaluate(&self, prog: &TypedProgram, bindings: &Bindings) -> Result<Evaluation> {
        let mut done: HashMap<String, Mat> = HashMap::new();
        let mut values = Vec::with_capacity(prog.decls.len());
        for (name, e) in &prog.decls {
            let m = self.eval(e, prog, bindings, &done)?;
            done.insert(name.clone(), m.clone());
            values.push((
                name.clone(),
                Value {
                    wire: e.wire.clone(),
                    matrix: m,
                },
            ));
        }
        Ok(Evaluation { values })
    }

    fn eval(&self, e: &TypedExpr, prog: &TypedProgram, b: &Bindings, done: &HashMap<String, Mat>) -> Result<Mat> {
        Ok(match &e.node {
            TypedNode::Primitive(name) => {
                let v = b
                    .values
                    .get(name)
                    .ok_or_else(|| Error::Binding(format!("no binding for `{name}`")))?;
                if v.wire != e.wire {
                    return Err(Error::Binding(format!(
                        "`{name}` is bound as {} but used as {}",
                        v.wire, e.wire
                    )));
                }
                v.matrix.clone()
            }
            TypedNode::Decl(name) => done[name].clone(),
            TypedNode::Identity(sys) => {
                let d = self.kind.wire_dim(prog.systems[sys]);
                Mat::identity(d, d)
            }
            TypedNode::Serial(g, f) => self.eval(g, prog, b, done)? * self.eval(f, prog, b, done)?,
            TypedNode::Parallel(f, h) => (self.tensor)(&self.eval(f, prog, b, done)?, &self.eval(h, prog, b, done)?),
            TypedNode::Sum(x, y) => self.eval(x, prog, b, done)? + self.eval(y, prog, b, done)?,
        })
    }
}

/// Parse, type and evaluate `source` against a JSON bindings manifest.
pub fn run_circuit(source: &str, kind: BackendKind, bindings_json: &str) -> Result<Evaluation> {
    let prog = super::parse_circuit(source)?;
    let systems = Registry::from_program(&prog).systems;
    let bindings = Bindings::from_json(bindings_json, kind, &systems)?;
    let typed = super::typecheck(&prog, &bindings.registry(&systems))?;
    Evaluator::new(kind).evaluate(&typed, &bindings)
}
