use std::collections::HashSet;

use super::ast::{Decl, Expr, ExprKind, Program, SystemDecl};
use super::lexer::{tokenize, Span, Tok, Token};
use crate::error::{Error, Result};

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

fn syntax(span: Span, message: String) -> Error {
    Error::Syntax {
        line: span.line,
        column: span.column,
        message,
    }
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Token> {
        let t = self.peek().clone();
        if t.tok == want {
            Ok(self.bump())
        } else {
            Err(syntax(t.span, format!("expected {}, found {}", want.describe(), t.tok.describe())))
        }
    }

    fn ident(&mut self) -> Result<(String, Span)> {
        let t = self.bump();
        match t.tok {
            Tok::Ident(s) => Ok((s, t.span)),
            other => Err(syntax(t.span, format!("expected identifier, found {}", other.describe()))),
        }
    }

    fn program(&mut self) -> Result<Program> {
        let mut systems = Vec::new();
        let mut seen = HashSet::new();
        while self.peek().tok == Tok::System {
            self.bump();
            let (name, span) = self.ident()?;
            self.expect(Tok::Eq)?;
            let t = self.bump();
            let level = match t.tok {
                Tok::Int(n) if n > 0 => n,
                Tok::Int(_) => return Err(syntax(t.span, "system level must be positive".into())),
                other => return Err(syntax(t.span, format!("expected integer, found {}", other.describe()))),
            };
            self.expect(Tok::Semi)?;
            if !seen.insert(name.clone()) {
                return Err(duplicate(name, span));
            }
            systems.push(SystemDecl { name, level, span });
        }
        let mut decls = Vec::new();
        let mut names = HashSet::new();
        loop {
            let t = self.peek().clone();
            match t.tok {
                Tok::Eof => break,
                Tok::Let => {
                    self.bump();
                    let (name, span) = self.ident()?;
                    self.expect(Tok::Eq)?;
                    let expr = self.expr()?;
                    self.expect(Tok::Semi)?;
                    if !names.insert(name.clone()) {
                        return Err(duplicate(name, span));
                    }
                    decls.push(Decl { name, expr, span });
                }
                Tok::System => {
                    return Err(syntax(t.span, "system declarations must precede `let`".into()));
                }
                other => return Err(syntax(t.span, format!("expected `let`, found {}", other.describe()))),
            }
        }
        Ok(Program { systems, decls })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.serial()?;
        while self.peek().tok == Tok::Plus {
            let span = self.bump().span;
            let rhs = self.serial()?;
            lhs = Expr::new(ExprKind::Sum(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn serial(&mut self) -> Result<Expr> {
        let mut lhs = self.par()?;
        while self.peek().tok == Tok::Dot {
            let span = self.bump().span;
            let rhs = self.par()?;
            lhs = Expr::new(ExprKind::Serial(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn par(&mut self) -> Result<Expr> {
        let mut lhs = self.atom()?;
        while self.peek().tok == Tok::Par {
            let span = self.bump().span;
            let rhs = self.atom()?;
            lhs = Expr::new(ExprKind::Parallel(Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.bump();
        match t.tok {
            Tok::Ident(s) => Ok(Expr::new(ExprKind::Primitive(s), t.span)),
            Tok::Id => {
                self.expect(Tok::LBracket)?;
                let (sys, _) = self.ident()?;
                self.expect(Tok::RBracket)?;
                Ok(Expr::new(ExprKind::Identity(sys), t.span))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(syntax(t.span, format!("unexpected {}", other.describe()))),
        }
    }
}

fn duplicate(name: String, span: Span) -> Error {
    Error::DuplicateDeclaration {
        name,
        line: span.line,
        column: span.column,
    }
}

pub fn parse_circuit(source: &str) -> Result<Program> {
    let mut p = Parser {
        toks: tokenize(source)?,
        pos: 0,
    };
    p.program()
}
