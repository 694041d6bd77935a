use std::fmt;

use super::lexer::Span;

#[derive(Clone, Debug)]
pub struct Program {
    pub systems: Vec<SystemDecl>,
    pub decls: Vec<Decl>,
}

#[derive(Clone, Debug)]
pub struct SystemDecl {
    pub name: String,
    pub level: usize,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct Decl {
    pub name: String,
    pub expr: Expr,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    /// Coarse-graining `a + b`.
    Sum(Box<Expr>, Box<Expr>),
    /// `g . f`: `g` after `f`.
    Serial(Box<Expr>, Box<Expr>),
    /// `f x h`.
    Parallel(Box<Expr>, Box<Expr>),
    Identity(String),
    Primitive(String),
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }

    fn precedence(&self) -> u8 {
        match self.kind {
            ExprKind::Sum(..) => 0,
            ExprKind::Serial(..) => 1,
            ExprKind::Parallel(..) => 2,
            _ => 3,
        }
    }
}

// Equality ignores source spans.
impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        self.kind == other.kind
    }
}

impl PartialEq for SystemDecl {
    fn eq(&self, other: &SystemDecl) -> bool {
        self.name == other.name && self.level == other.level
    }
}

impl PartialEq for Decl {
    fn eq(&self, other: &Decl) -> bool {
        self.name == other.name && self.expr == other.expr
    }
}

impl PartialEq for Program {
    fn eq(&self, other: &Program) -> bool {
        self.systems == other.systems && self.decls == other.decls
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the minimum parentheses: operators are left-associative, so
/// a right operand of equal precedence is parenthesized.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        let (l, r, op) = match &self.kind {
            ExprKind::Identity(s) => return write!(f, "id[{s}]"),
            ExprKind::Primitive(s) => return f.write_str(s),
            ExprKind::Sum(l, r) => (l, r, " + "),
            ExprKind::Serial(l, r) => (l, r, " . "),
            ExprKind::Parallel(l, r) => (l, r, " x "),
        };
        write_operand(f, l, p)?;
        f.write_str(op)?;
        write_operand(f, r, p + 1)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.systems {
            writeln!(f, "system {} = {};", s.name, s.level)?;
        }
        if !self.systems.is_empty() && !self.decls.is_empty() {
            writeln!(f)?;
        }
        for d in &self.decls {
            writeln!(f, "let {} = {};", d.name, d.expr)?;
        }
        Ok(())
    }
}

pub fn print_program(p: &Program) -> String {
    p.to_string()
}
