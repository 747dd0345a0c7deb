use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{typecheck, Ast, Context, ExprError};
use crate::calculus::{CalculusError, RatFunction};
use crate::eudoxus::{EudoxusReal, SignVerdict};
use crate::hyper::{Germ, HyperClass, HyperError};

#[derive(Clone, Debug)]
pub enum Value {
    Real(EudoxusReal),
    Hyper(Germ),
    Poly(RatFunction),
    Class(Germ, HyperClass),
}

/// Evaluates checked expressions. Sign decisions for real division scan
/// indices up to the remaining budget and are charged one unit per probe;
/// each multiplication performed by `^` costs one unit.
#[derive(Clone, Debug)]
pub struct Evaluator {
    budget: u64,
    used: u64,
}

fn rat(p: &BigInt, q: &BigInt) -> BigRational {
    BigRational::new(p.clone(), q.clone())
}

fn hyper_err(e: HyperError) -> ExprError {
    match e {
        HyperError::DivisionByZeroGerm => ExprError::Domain("division by the zero hyperreal".into()),
        HyperError::InfiniteElement => ExprError::Domain("st of an infinite hyperreal".into()),
        e => ExprError::Domain(e.to_string()),
    }
}

impl Evaluator {
    pub fn new(budget: u64) -> Self {
        Evaluator { budget, used: 0 }
    }

    pub fn budget_used(&self) -> u64 {
        self.used
    }

    fn remaining(&self) -> u64 {
        self.budget.saturating_sub(self.used)
    }

    fn charge(&mut self, units: u64) -> Result<(), ExprError> {
        self.used = self.used.saturating_add(units);
        if self.used > self.budget {
            return Err(ExprError::Budget(format!(
                "needed more than {} units",
                self.budget
            )));
        }
        Ok(())
    }

    /// Typechecks in `ctx`, then evaluates to the context's value kind.
    pub fn eval(&mut self, ast: &Ast, ctx: Context) -> Result<Value, ExprError> {
        typecheck(ast, ctx)?;
        match ctx {
            Context::Real => self.real(ast).map(Value::Real),
            Context::Hyper => match ast {
                Ast::Classify(inner) => {
                    let g = self.hyper(inner)?;
                    let class = g.classify();
                    Ok(Value::Class(g, class))
                }
                _ => self.hyper(ast).map(Value::Hyper),
            },
            Context::Derive => self.poly(ast).map(Value::Poly),
        }
    }

    pub fn real(&mut self, ast: &Ast) -> Result<EudoxusReal, ExprError> {
        Ok(match ast {
            Ast::Int(n) => EudoxusReal::from_int(n.clone()),
            Ast::Rat(p, q) => EudoxusReal::from_ratio(&rat(p, q)),
            Ast::Sqrt(k) => EudoxusReal::from_sqrt_int(
                k.to_biguint()
                    .ok_or_else(|| ExprError::Domain("sqrt of a negative integer".into()))?,
            ),
            Ast::Add(a, b) => self.real(a)?.add(&self.real(b)?),
            Ast::Sub(a, b) => self.real(a)?.sub(&self.real(b)?),
            Ast::Mul(a, b) => self.real(a)?.mul(&self.real(b)?),
            Ast::Div(a, b) => {
                if matches!(&**b, Ast::Int(n) if n.is_zero()) {
                    return Err(ExprError::Domain("division by zero".into()));
                }
                let num = self.real(a)?;
                let den = self.real(b)?;
                num.mul(&self.recip(&den)?)
            }
            Ast::Pow(a, n) => {
                let base = self.real(a)?;
                self.charge(u64::from(*n))?;
                let mut acc = EudoxusReal::from_int(1);
                for _ in 0..*n {
                    acc = acc.mul(&base);
                }
                acc
            }
            Ast::St(inner) => EudoxusReal::from_ratio(&self.hyper(inner)?.standard_part().map_err(hyper_err)?),
            Ast::Dx | Ast::Omega | Ast::Var | Ast::Classify(_) => {
                return Err(ExprError::Sort(format!("'{ast}' is not a real")))
            }
        })
    }

    fn recip(&mut self, x: &EudoxusReal) -> Result<EudoxusReal, ExprError> {
        let scan = x.sign_scan(self.remaining());
        self.charge(scan.probes)?;
        if let SignVerdict::ZeroWithin(eps) = scan.verdict {
            return Err(ExprError::Budget(format!(
                "sign of divisor undecided (|d| <= {eps})"
            )));
        }
        x.recip(scan.index.try_into().unwrap_or(u64::MAX))
            .map_err(|e| ExprError::Budget(e.to_string()))
    }

    pub fn hyper(&mut self, ast: &Ast) -> Result<Germ, ExprError> {
        Ok(match ast {
            Ast::Int(n) => Germ::from_int(n.clone()),
            Ast::Rat(p, q) => Germ::from_real(rat(p, q)),
            Ast::Dx => Germ::dx(),
            Ast::Omega => Germ::omega(),
            Ast::Add(a, b) => self.hyper(a)?.add(&self.hyper(b)?),
            Ast::Sub(a, b) => self.hyper(a)?.sub(&self.hyper(b)?),
            Ast::Mul(a, b) => self.hyper(a)?.mul(&self.hyper(b)?),
            Ast::Div(a, b) => self.hyper(a)?.div(&self.hyper(b)?).map_err(hyper_err)?,
            Ast::Pow(a, n) => {
                let base = self.hyper(a)?;
                self.charge(u64::from(*n))?;
                base.pow(i64::from(*n)).map_err(hyper_err)?
            }
            Ast::St(inner) => Germ::from_real(self.hyper(inner)?.standard_part().map_err(hyper_err)?),
            Ast::Sqrt(_) | Ast::Var | Ast::Classify(_) => {
                return Err(ExprError::Sort(format!("'{ast}' is not a hyperreal germ")))
            }
        })
    }

    pub fn poly(&mut self, ast: &Ast) -> Result<RatFunction, ExprError> {
        let zero_div = |e: CalculusError| ExprError::Domain(e.to_string());
        Ok(match ast {
            Ast::Int(n) => RatFunction::constant(BigRational::from_integer(n.clone())),
            Ast::Rat(p, q) => RatFunction::constant(rat(p, q)),
            Ast::Var => RatFunction::var(),
            Ast::Add(a, b) => self.poly(a)?.add(&self.poly(b)?),
            Ast::Sub(a, b) => self.poly(a)?.sub(&self.poly(b)?),
            Ast::Mul(a, b) => self.poly(a)?.mul(&self.poly(b)?),
            Ast::Div(a, b) => self.poly(a)?.div(&self.poly(b)?).map_err(zero_div)?,
            Ast::Pow(a, n) => {
                let base = self.poly(a)?;
                self.charge(u64::from(*n))?;
                base.pow(*n)
            }
            Ast::St(inner) => RatFunction::constant(self.hyper(inner)?.standard_part().map_err(hyper_err)?),
            Ast::Sqrt(_) | Ast::Dx | Ast::Omega | Ast::Classify(_) => {
                return Err(ExprError::Sort(format!("'{ast}' is not a rational function of x")))
            }
        })
    }
}
