use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::ast::{Expr, ExprKind, Program};
use crate::error::{Error, Result};

/// Ordered input and output system labels of a box; empty lists are the
/// trivial system.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WireType {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl WireType {
    pub fn new(inputs: Vec<String>, outputs: Vec<String>) -> WireType {
        WireType { inputs, outputs }
    }

    pub fn state(systems: &[&str]) -> WireType {
        WireType::new(vec![], systems.iter().map(|s| s.to_string()).collect())
    }

    pub fn effect(systems: &[&str]) -> WireType {
        WireType::new(systems.iter().map(|s| s.to_string()).collect(), vec![])
    }

    pub fn is_scalar(&self) -> bool {
        self.inputs.is_empty() && self.outputs.is_empty()
    }
}

pub fn systems_label(s: &[String]) -> String {
    if s.is_empty() {
        "I".into()
    } else {
        s.join(" x ")
    }
}

impl fmt::Display for WireType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", systems_label(&self.inputs), systems_label(&self.outputs))
    }
}

/// Declared systems and the wire types of the available primitives.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    pub systems: BTreeMap<String, usize>,
    pub primitives: HashMap<String, WireType>,
}

impl Registry {
    pub fn from_program(p: &Program) -> Registry {
        Registry {
            systems: p.systems.iter().map(|s| (s.name.clone(), s.level)).collect(),
            primitives: HashMap::new(),
        }
    }

    pub fn register(&mut self, name: impl Into<String>, wire: WireType) {
        self.primitives.insert(name.into(), wire);
    }

    pub fn levels(&self, systems: &[String]) -> Result<Vec<usize>> {
        systems
            .iter()
            .map(|s| {
                self.systems
                    .get(s)
                    .copied()
                    .ok_or_else(|| Error::Binding(format!("undeclared system `{s}`")))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TypedNode {
    Sum(Box<TypedExpr>, Box<TypedExpr>),
    Serial(Box<TypedExpr>, Box<TypedExpr>),
    Parallel(Box<TypedExpr>, Box<TypedExpr>),
    Identity(String),
    Primitive(String),
    /// Reference to an earlier `let`.
    Decl(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypedExpr {
    pub node: TypedNode,
    pub wire: WireType,
}

#[derive(Clone, Debug)]
pub struct TypedProgram {
    pub systems: BTreeMap<String, usize>,
    pub decls: Vec<(String, TypedExpr)>,
}

impl TypedProgram {
    pub fn get(&self, name: &str) -> Option<&TypedExpr> {
        self.decls.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }
}

fn mismatch(expected: &[String], actual: &[String], e: &Expr) -> Error {
    Error::WireMismatch {
        expected: systems_label(expected),
        actual: systems_label(actual),
        line: e.span.line,
        column: e.span.column,
    }
}

fn check(e: &Expr, reg: &Registry, lets: &HashMap<String, WireType>) -> Result<TypedExpr> {
    let unknown = |name: &str| Error::UnknownName {
        name: name.to_string(),
        line: e.span.line,
        column: e.span.column,
    };
    Ok(match &e.kind {
        ExprKind::Primitive(name) => {
            if let Some(w) = lets.get(name) {
                TypedExpr {
                    node: TypedNode::Decl(name.clone()),
                    wire: w.clone(),
                }
            } else {
                let w = reg.primitives.get(name).ok_or_else(|| unknown(name))?;
                TypedExpr {
                    node: TypedNode::Primitive(name.clone()),
                    wire: w.clone(),
                }
            }
        }
        ExprKind::Identity(sys) => {
            if !reg.systems.contains_key(sys) {
                return Err(unknown(sys));
            }
            TypedExpr {
                node: TypedNode::Identity(sys.clone()),
                wire: WireType::new(vec![sys.clone()], vec![sys.clone()]),
            }
        }
        ExprKind::Serial(g, f) => {
            let (tg, tf) = (check(g, reg, lets)?, check(f, reg, lets)?);
            if tf.wire.outputs != tg.wire.inputs {
                return Err(mismatch(&tg.wire.inputs, &tf.wire.outputs, e));
            }
            let wire = WireType::new(tf.wire.inputs.clone(), tg.wire.outputs.clone());
            TypedExpr {
                node: TypedNode::Serial(Box::new(tg), Box::new(tf)),
                wire,
            }
        }
        ExprKind::Parallel(f, h) => {
            let (tf, th) = (check(f, reg, lets)?, check(h, reg, lets)?);
            let mut inputs = tf.wire.inputs.clone();
            inputs.extend(th.wire.inputs.iter().cloned());
            let mut outputs = tf.wire.outputs.clone();
            outputs.extend(th.wire.outputs.iter().cloned());
            TypedExpr {
                node: TypedNode::Parallel(Box::new(tf), Box::new(th)),
                wire: WireType::new(inputs, outputs),
            }
        }
        ExprKind::Sum(a, b) => {
            let (ta, tb) = (check(a, reg, lets)?, check(b, reg, lets)?);
            if ta.wire.inputs != tb.wire.inputs {
                return Err(mismatch(&ta.wire.inputs, &tb.wire.inputs, e));
            }
            if ta.wire.outputs != tb.wire.outputs {
                return Err(mismatch(&ta.wire.outputs, &tb.wire.outputs, e));
            }
            let wire = ta.wire.clone();
            TypedExpr {
                node: TypedNode::Sum(Box::new(ta), Box::new(tb)),
                wire,
            }
        }
    })
}

/// One bottom-up pass annotating every node with its wire type.
pub fn typecheck(p: &Program, reg: &Registry) -> Result<TypedProgram> {
    let mut lets = HashMap::new();
    let mut decls = Vec::with_capacity(p.decls.len());
    for d in &p.decls {
        if reg.primitives.contains_key(&d.name) {
            return Err(Error::DuplicateDeclaration {
                name: d.name.clone(),
                line: d.span.line,
                column: d.span.column,
            });
        }
        let t = check(&d.expr, reg, &lets)?;
        lets.insert(d.name.clone(), t.wire.clone());
        decls.push((d.name.clone(), t));
    }
    Ok(TypedProgram {
        systems: reg.systems.clone(),
        decls,
    })
}
