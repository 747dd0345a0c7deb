//! The expression language shared by the command-line tools.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ['^' int]
//! atom   := int | int '/' int | 'sqrt' '(' int ')' | 'dx' | 'omega' | 'x'
//!         | 'st' '(' expr ')' | 'classify' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `p/q` with integer literals on both sides (and `q != 0`) is folded into a
//! rational literal while parsing. There is no unary minus.

mod eval;
mod gen;
mod lex;
mod parse;
mod typeck;

use std::fmt;

use num_bigint::BigInt;

pub use eval::{Evaluator, Value};
pub use gen::random_expression;
pub use lex::{tokenize, Token, TokenKind};
pub use parse::{parse, parse_tokens};
pub use typeck::{typecheck, Context, Sort};

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ast {
    Int(BigInt),
    Rat(BigInt, BigInt),
    Sqrt(BigInt),
    Dx,
    Omega,
    Var,
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
    St(Box<Ast>),
    Classify(Box<Ast>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("sort error: {0}")]
    Sort(String),
    #[error("variable 'x' is only allowed in a derive body")]
    VarOutsideDerive,
    #[error("{0}")]
    Domain(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
}

impl Ast {
    fn level(&self) -> u8 {
        match self {
            Ast::Add(..) | Ast::Sub(..) => 1,
            Ast::Mul(..) | Ast::Div(..) | Ast::Rat(..) => 2,
            Ast::Pow(..) => 3,
            _ => 4,
        }
    }
}

fn child(f: &mut fmt::Formatter<'_>, ast: &Ast, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({ast})")
    } else {
        write!(f, "{ast}")
    }
}

impl fmt::Display for Ast {
    /// Minimal parentheses; the output parses back to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let binary = |f: &mut fmt::Formatter<'_>, a: &Ast, op: &str, b: &Ast| {
            let l = self.level();
            child(f, a, a.level() < l)?;
            write!(f, " {op} ")?;
            child(f, b, b.level() <= l)
        };
        match self {
            Ast::Int(n) => write!(f, "{n}"),
            Ast::Rat(p, q) => write!(f, "{p}/{q}"),
            Ast::Sqrt(k) => write!(f, "sqrt({k})"),
            Ast::Dx => f.write_str("dx"),
            Ast::Omega => f.write_str("omega"),
            Ast::Var => f.write_str("x"),
            Ast::Add(a, b) => binary(f, a, "+", b),
            Ast::Sub(a, b) => binary(f, a, "-", b),
            Ast::Mul(a, b) => binary(f, a, "*", b),
            Ast::Div(a, b) => binary(f, a, "/", b),
            Ast::Pow(a, n) => {
                child(f, a, a.level() < 4)?;
                write!(f, "^{n}")
            }
            Ast::St(a) => write!(f, "st({a})"),
            Ast::Classify(a) => write!(f, "classify({a})"),
        }
    }
}
