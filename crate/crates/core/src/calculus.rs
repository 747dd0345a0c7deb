//! Derivatives as standard parts of difference quotients over an infinitesimal
//! increment.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::hyper::Germ;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CalculusError {
    #[error("denominator vanishes at the substituted point")]
    SubstitutionPole,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("increment must be a nonzero infinitesimal")]
    BadIncrement,
}

/// `num / den` over the rationals, reduced with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunction {
    num: Poly,
    den: Poly,
}

impl RatFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self, CalculusError> {
        if den.is_zero() {
            return Err(CalculusError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::constant(BigRational::zero()));
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g).0;
        let den = den.div_rem(&g).0;
        let inv = BigRational::one() / den.lead();
        Ok(RatFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn polynomial(p: Poly) -> Self {
        RatFunction::new(p, Poly::from_ints([1])).expect("unit denominator")
    }

    pub fn constant(c: BigRational) -> Self {
        RatFunction {
            num: Poly::constant(c),
            den: Poly::from_ints([1]),
        }
    }

    pub fn var() -> Self {
        Self::polynomial(Poly::var())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn add(&self, other: &Self) -> Self {
        RatFunction::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
        .expect("nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&RatFunction {
            num: -&other.num,
            den: other.den.clone(),
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatFunction::new(&self.num * &other.num, &self.den * &other.den)
            .expect("nonzero denominators")
    }

    pub fn div(&self, other: &Self) -> Result<Self, CalculusError> {
        RatFunction::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn pow(&self, exp: u32) -> Self {
        RatFunction::new(self.num.pow(exp), self.den.pow(exp)).expect("nonzero denominator")
    }

    pub fn eval(&self, x: &BigRational) -> Result<BigRational, CalculusError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(CalculusError::SubstitutionPole);
        }
        Ok(self.num.eval(x) / d)
    }

    /// Natural extension to germs: substitute `x` into numerator and denominator.
    pub fn extend(&self, x: &Germ) -> Result<Germ, CalculusError> {
        let (num, den) = self.substitute(x.num(), x.den());
        Germ::new(num, den).map_err(|_| CalculusError::SubstitutionPole)
    }

    /// `self(p / q)` as an unreduced quotient `(num, den)`, by homogenising:
    /// `N(p/q) = sum a_k p^k q^(n-k) / q^n`.
    fn substitute(&self, p: &Poly, q: &Poly) -> (Poly, Poly) {
        let homogenise = |f: &Poly| {
            let n = f.coeffs().len().saturating_sub(1);
            let mut p_pow = Poly::from_ints([1]);
            let q_pows = powers(q, n);
            let mut acc = Poly::zero();
            for (k, c) in f.coeffs().iter().enumerate() {
                acc = &acc + &(&p_pow * &q_pows[n - k]).scale(c);
                p_pow = &p_pow * p;
            }
            (acc, n)
        };
        let (num, n) = homogenise(&self.num);
        let (den, m) = homogenise(&self.den);
        // N~ / q^n divided by D~ / q^m
        if n >= m {
            (num, &den * &q.pow((n - m) as u32))
        } else {
            (&num * &q.pow((m - n) as u32), den)
        }
    }

    /// `st((f(x0 + dx) - f(x0)) / dx)` with the infinitesimal of slopes `1/i`.
    pub fn derivative_at(&self, x0: &BigRational) -> Result<BigRational, CalculusError> {
        self.derivative_with_increment(x0, &Germ::dx())
    }

    /// Difference quotient over an arbitrary nonzero infinitesimal increment.
    pub fn derivative_with_increment(
        &self,
        x0: &BigRational,
        h: &Germ,
    ) -> Result<BigRational, CalculusError> {
        if h.is_zero() || !h.classify().is_infinitesimal_or_zero() {
            return Err(CalculusError::BadIncrement);
        }
        let fx0 = self.eval(x0)?;
        let (hn, hd) = (h.num(), h.den());
        let moved = &hd.scale(x0) + hn;
        let (num, den) = self.substitute(&moved, hd);
        // (num / den - f(x0)) / (hn / hd)
        let q_num = &(&num - &den.scale(&fx0)) * hd;
        let q_den = &den * hn;
        standard_part(&q_num, &q_den)
    }
}

fn powers(q: &Poly, n: usize) -> Vec<Poly> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Poly::from_ints([1]));
    for k in 0..n {
        let next = &out[k] * q;
        out.push(next);
    }
    out
}

/// Limit of `num(i) / den(i)` as `i -> oo`; the quotient need not be reduced.
fn standard_part(num: &Poly, den: &Poly) -> Result<BigRational, CalculusError> {
    let (Some(dn), Some(dd)) = (num.degree(), den.degree()) else {
        return if den.is_zero() {
            Err(CalculusError::SubstitutionPole)
        } else {
            Ok(BigRational::zero())
        };
    };
    match dn.cmp(&dd) {
        std::cmp::Ordering::Less => Ok(BigRational::zero()),
        std::cmp::Ordering::Equal => Ok(num.lead() / den.lead()),
        // f is defined at x0, so the quotient is finite
        std::cmp::Ordering::Greater => Err(CalculusError::SubstitutionPole),
    }
}

/// `st(x - y)` is zero: `x` and `y` differ by an infinitesimal.
pub fn adequal(x: &Germ, y: &Germ) -> bool {
    x.sub(y).classify().is_infinitesimal_or_zero()
}

impl fmt::Display for RatFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.lead().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
