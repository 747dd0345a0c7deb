use std::fmt;

use super::{Ast, ExprError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Context {
    /// Eudoxus reals: `sqrt` allowed, no infinitesimals.
    Real,
    /// Rational germs of the index.
    Hyper,
    /// Rational functions of `x`.
    Derive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sort {
    Real,
    Hyper,
    Poly,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Real => "Real",
            Sort::Hyper => "Hyper",
            Sort::Poly => "Poly",
        })
    }
}

/// Sort of `ast` in `ctx`. `st(..)` checks its argument as a hyperreal and
/// yields a real; `classify(..)` is only accepted at the root of a hyper
/// expression. Reals promote to the context sort in mixed nodes.
pub fn typecheck(ast: &Ast, ctx: Context) -> Result<Sort, ExprError> {
    match (ast, ctx) {
        (Ast::Classify(inner), Context::Hyper) => {
            check(inner, Context::Hyper)?;
            Ok(Sort::Hyper)
        }
        _ => check(ast, ctx),
    }
}

fn join(a: Sort, b: Sort) -> Sort {
    if a == Sort::Real {
        b
    } else {
        a
    }
}

fn check(ast: &Ast, ctx: Context) -> Result<Sort, ExprError> {
    match ast {
        Ast::Int(_) | Ast::Rat(..) => Ok(Sort::Real),
        Ast::Sqrt(_) => match ctx {
            Context::Real => Ok(Sort::Real),
            _ => Err(ExprError::Sort(
                "sqrt is only available for real (digits) expressions".into(),
            )),
        },
        Ast::Dx | Ast::Omega => match ctx {
            Context::Hyper => Ok(Sort::Hyper),
            Context::Real => Err(ExprError::Sort(format!(
                "'{ast}' is a hyperreal; wrap it in st(..) to get a real"
            ))),
            Context::Derive => Err(ExprError::Sort(format!(
                "'{ast}' cannot appear in a derive body"
            ))),
        },
        Ast::Var => match ctx {
            Context::Derive => Ok(Sort::Poly),
            _ => Err(ExprError::VarOutsideDerive),
        },
        Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) | Ast::Div(a, b) => {
            Ok(join(check(a, ctx)?, check(b, ctx)?))
        }
        Ast::Pow(a, _) => check(a, ctx),
        Ast::St(inner) => {
            check(inner, Context::Hyper)?;
            Ok(Sort::Real)
        }
        Ast::Classify(_) => Err(ExprError::Sort(
            "classify(..) is only allowed as the whole expression of a hyper query".into(),
        )),
    }
}
