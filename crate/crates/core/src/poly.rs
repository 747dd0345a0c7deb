//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints<I: Into<BigInt>>(coeffs: impl IntoIterator<Item = I>) -> Self {
        Poly::new(
            coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    /// The indeterminate.
    pub fn var() -> Self {
        Poly::from_ints([0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeffs.first().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Poly::constant(BigRational::one()), |acc, _| &acc * self)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.lead();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = rem.last().expect("nonempty") / &lead;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor; zero iff both inputs are zero.
    pub fn gcd(&self, other: &Poly) -> Poly {
        // primitive remainder sequence over the integers
        let mut a = self.primitive_ints();
        let mut b = other.primitive_ints();
        while !b.is_empty() {
            if b.len() == 1 {
                return Poly::constant(BigRational::one());
            }
            let r = primitive_part(pseudo_rem(a, &b));
            a = b;
            b = r;
        }
        if a.is_empty() {
            return Poly::zero();
        }
        let lead = BigRational::from_integer(a.last().expect("nonempty").clone());
        Poly::new(a.into_iter().map(|c| BigRational::from_integer(c) / &lead).collect())
    }

    /// Integer coefficients with content 1; empty for zero.
    fn primitive_ints(&self) -> Vec<BigInt> {
        let clear = self.denominator_lcm();
        primitive_part(
            self.coeffs
                .iter()
                .map(|c| (c * &clear).to_integer())
                .collect(),
        )
    }

    /// Substitutes `x -> other`.
    pub fn compose(&self, other: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * other) + &Poly::constant(c.clone()))
    }

    /// Least common multiple of coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Gcd of the numerators of the coefficients (content for integer polys).
    pub fn numerator_gcd(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
    }

    /// Integer coefficients; `None` if some coefficient is not an integer.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// Upper bound on the absolute value of every real root (Cauchy).
    pub fn root_bound(&self) -> BigRational {
        let lead = self.lead().abs();
        if lead.is_zero() {
            return BigRational::zero();
        }
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(BigRational::zero);
        m + BigRational::one()
    }

    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let coeff = if mag.is_integer() {
                mag.to_integer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            match i {
                0 => out.push_str(&coeff),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&coeff);
                        out.push('*');
                    }
                    out.push_str(var);
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        out
    }

    /// Parses sums of terms `[c[/d]*]var[^k]` or `c[/d]`, e.g. `3*i^2 - i + 1/2`.
    pub fn parse_with(src: &str, var: &str) -> Result<Poly, ParseError> {
        let bytes = src.as_bytes();
        let mut pos = 0usize;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos] == b' ' {
                *pos += 1;
            }
        };
        let int = |pos: &mut usize| -> Option<BigInt> {
            let from = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            (from < *pos).then(|| src[from..*pos].parse().expect("digits"))
        };
        let mut acc = Poly::zero();
        let mut first = true;
        loop {
            skip_ws(&mut pos);
            let mut negative = false;
            if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
                if first && bytes[pos] == b'+' {
                    return Err(ParseError::new(pos, "term"));
                }
                negative = bytes[pos] == b'-';
                pos += 1;
                skip_ws(&mut pos);
            } else if !first {
                return Err(ParseError::new(pos, "'+' or '-'"));
            }
            first = false;
            let mut coeff = BigRational::one();
            let mut has_coeff = false;
            if let Some(n) = int(&mut pos) {
                coeff = BigRational::from_integer(n);
                has_coeff = true;
                if pos < bytes.len() && bytes[pos] == b'/' {
                    pos += 1;
                    let d = int(&mut pos).ok_or_else(|| ParseError::new(pos, "denominator"))?;
                    if d.is_zero() {
                        return Err(ParseError::new(pos - 1, "nonzero denominator"));
                    }
                    coeff /= BigRational::from_integer(d);
                }
                if pos < bytes.len() && bytes[pos] == b'*' {
                    pos += 1;
                } else {
                    let term = Poly::constant(coeff);
                    acc = if negative { &acc - &term } else { &acc + &term };
                    skip_ws(&mut pos);
                    if pos == bytes.len() {
                        return Ok(acc);
                    }
                    continue;
                }
            }
            if !src[pos..].starts_with(var) {
                let what = if has_coeff { "variable" } else { "term" };
                return Err(ParseError::new(pos, what));
            }
            pos += var.len();
            let mut exp = 1u32;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let at = pos;
                exp = int(&mut pos)
                    .and_then(|e| u32::try_from(e).ok())
                    .ok_or_else(|| ParseError::new(at, "exponent"))?;
            }
            let term = Poly::var().pow(exp).scale(&coeff);
            acc = if negative { &acc - &term } else { &acc + &term };
            skip_ws(&mut pos);
            if pos == bytes.len() {
                return Ok(acc);
            }
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &-rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

fn primitive_part(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    let content = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !content.is_zero() && !content.is_one() {
        for c in &mut v {
            *c /= &content;
        }
    }
    v
}

/// `lead(b)^k a mod b` with integer arithmetic only.
fn pseudo_rem(mut r: Vec<BigInt>, b: &[BigInt]) -> Vec<BigInt> {
    let lb = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let k = r.len() - b.len();
        let c = r.last().expect("nonempty").clone();
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[k + i] -= &c * bc;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c.iter().copied())
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        assert_eq!(&a * &a, p(&[1, 2, 1]));
        assert_eq!(&a - &a, Poly::zero());
        let (q, r) = p(&[-1, 0, 1]).div_rem(&p(&[-1, 1]));
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[1, 2, 1])), p(&[1, 1]));
        assert_eq!(p(&[1, 0, 1]).compose(&p(&[1, 1])), p(&[2, 2, 1]));
        assert_eq!(p(&[6, 0, 3]).numerator_gcd(), BigInt::from(3));
    }

    #[test]
    fn text_round_trip() {
        let a = Poly::new(vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::from_integer((-1).into()),
            BigRational::from_integer(3.into()),
        ]);
        let s = a.display_with("i");
        assert_eq!(s, "3*i^2 - i + 1/2");
        assert_eq!(Poly::parse_with(&s, "i").unwrap(), a);
        assert_eq!(Poly::parse_with("-2*x^3 + x", "x").unwrap(), p(&[0, 1, 0, -2]));
        assert_eq!(Poly::parse_with("0", "x").unwrap(), Poly::zero());
        assert!(Poly::parse_with("x +", "x").is_err());
        assert!(Poly::parse_with("2 x", "x").is_err());
    }
}
