//! A small language for circuits of states, effects and channels.
//!
//! ```text
//! system A = 2;
//! system B = 2;
//! let p = (e0 x f0) . bell;
//! ```
//!
//! `g . f` is `g` after `f`, `f x h` runs `f` and `h` side by side, `a + b`
//! coarse-grains, and `id[A]` is the identity on `A`. Both binary operators
//! associate to the left; `x` binds tighter than `.`, which binds tighter
//! than `+`. Wire permutations are never implicit: use a bound swap.

mod ast;
mod eval;
mod laws;
mod lexer;
mod parser;
mod typecheck;

pub use ast::{print_program, Decl, Expr, ExprKind, Program, SystemDecl};
pub use eval::{
    effect_value, kraus_value, run_circuit, state_value, swap_value, tabulate, Bindings, Evaluation, Evaluator,
    TensorFn, Value,
};
pub use laws::{law_check, law_check_with, law_instance, random_channel, LAW_TOL};
pub use lexer::{tokenize, Span, Tok, Token};
pub use parser::parse_circuit;
pub use typecheck::{systems_label, typecheck, Registry, TypedExpr, TypedNode, TypedProgram, WireType};
