//! Eudoxus reals: almost homomorphisms modulo bounded functions.
//!
//! Equality of two classes is not decidable, so comparisons take an explicit
//! budget and may answer "indistinguishable within eps". Every answer below is
//! backed by the same fact: if `|d_f| <= C` then `|f(n) - r n| <= C` for the
//! slope `r` of `f` and every integer `n`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ahom::AlmostHom;

/// Dyadic probes `±2^j`, `j < DYADIC_PROBES`, added to every window check.
const DYADIC_PROBES: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignVerdict {
    Positive,
    Negative,
    /// `|x| <= eps`.
    ZeroWithin(BigRational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Greater,
    IndistinguishableWithin(BigRational),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EudoxusError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("sign undecided within budget (|x| <= {eps}); cannot divide")]
    UndecidedSign { eps: BigRational },
}

/// Outcome of a positivity scan, with the index that decided it.
#[derive(Clone, Debug)]
pub struct SignScan {
    pub verdict: SignVerdict,
    pub index: BigInt,
    pub probes: u64,
}

#[derive(Clone, Debug)]
pub struct EudoxusReal {
    rep: AlmostHom,
}

impl EudoxusReal {
    pub fn from_rep(rep: AlmostHom) -> Self {
        EudoxusReal { rep }
    }

    pub fn from_rational(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, EudoxusError> {
        AlmostHom::floor_linear(p, q)
            .map(Self::from_rep)
            .map_err(|_| EudoxusError::ZeroDenominator)
    }

    pub fn from_ratio(r: &BigRational) -> Self {
        Self::from_rep(
            AlmostHom::floor_linear(r.numer().clone(), r.denom().clone())
                .expect("BigRational denominators are nonzero"),
        )
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::from_rep(AlmostHom::floor_linear(n, 1).expect("unit denominator"))
    }

    pub fn from_sqrt_int(k: impl Into<BigUint>) -> Self {
        Self::from_rep(AlmostHom::floor_sqrt(k))
    }

    pub fn rep(&self) -> &AlmostHom {
        &self.rep
    }

    pub fn bound(&self) -> &BigInt {
        self.rep.bound()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_rep(self.rep.add(&other.rep))
    }

    pub fn neg(&self) -> Self {
        Self::from_rep(self.rep.neg())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product as composition of representatives.
    pub fn mul(&self, other: &Self) -> Self {
        Self::from_rep(self.rep.compose(&other.rep))
    }

    pub fn scale(&self, m: impl Into<BigInt>) -> Self {
        Self::from_rep(self.rep.scale(m))
    }

    /// Multiplicative inverse. The sign must be decided within `budget`.
    ///
    /// For positive `x` the representative is `p -> a` with
    /// `x(a - 1) < p <= x(a)` (found by bisection), extended oddly to `p < 0`.
    /// When the representative is nondecreasing this is `min{a >= 0 : x(a) >= p}`.
    pub fn recip(&self, budget: u64) -> Result<Self, EudoxusError> {
        let scan = self.sign_scan(budget);
        match scan.verdict {
            SignVerdict::Positive => Ok(Self::from_rep(inverse(&self.rep, scan.index))),
            SignVerdict::Negative => Ok(Self::from_rep(inverse(&self.rep.neg(), scan.index).neg())),
            SignVerdict::ZeroWithin(eps) => Err(EudoxusError::UndecidedSign { eps }),
        }
    }

    pub fn div(&self, other: &Self, budget: u64) -> Result<Self, EudoxusError> {
        Ok(self.mul(&other.recip(budget)?))
    }

    pub fn pow(&self, exp: i64, budget: u64) -> Result<Self, EudoxusError> {
        let base = if exp < 0 { self.recip(budget)? } else { self.clone() };
        let mut acc = Self::from_int(1);
        for _ in 0..exp.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// `x(2^k) / 2^k`, within `C / 2^k` of the represented real.
    pub fn slope_approx(&self, k: u32) -> BigRational {
        let n = BigInt::one() << k;
        BigRational::new(self.rep.eval(&n), n)
    }

    pub fn sign_budget(&self, budget: u64) -> SignVerdict {
        self.sign_scan(budget).verdict
    }

    /// Scans `n = 1, 2, 4, ... <= budget`: positive once `x(n) > C`, negative
    /// once `x(n) < -C`. Otherwise reports the radius `(C + |x(n_max)|) / n_max`.
    pub fn sign_scan(&self, budget: u64) -> SignScan {
        let c = self.bound();
        let budget = BigInt::from(budget.max(1));
        let mut n = BigInt::one();
        let mut last = n.clone();
        let mut probes = 0u64;
        while n <= budget {
            probes += 1;
            let v = self.rep.eval(&n);
            if v > *c {
                return SignScan {
                    verdict: SignVerdict::Positive,
                    index: n,
                    probes,
                };
            }
            if v < -c {
                return SignScan {
                    verdict: SignVerdict::Negative,
                    index: n,
                    probes,
                };
            }
            last = n.clone();
            n <<= 1;
        }
        let eps = BigRational::new(c + self.rep.eval(&last).abs(), last.clone());
        SignScan {
            verdict: SignVerdict::ZeroWithin(eps),
            index: last,
            probes,
        }
    }

    pub fn compare(&self, other: &Self, budget: u64) -> Comparison {
        match self.sub(other).sign_budget(budget) {
            SignVerdict::Positive => Comparison::Greater,
            SignVerdict::Negative => Comparison::Less,
            SignVerdict::ZeroWithin(eps) => Comparison::IndistinguishableWithin(eps),
        }
    }

    /// `|x(a) - y(a)| <= C_x + C_y` for `a` in `[-window, window]` and at the
    /// probes `±2^j`. Necessary for equality of the classes; for distinct
    /// reals it fails as soon as `|a| |x - y| > 2 (C_x + C_y)`.
    pub fn equals_within(&self, other: &Self, window: u64) -> bool {
        let combined = self.bound() + other.bound();
        let w = window as i64;
        let close = |a: &BigInt| (self.rep.eval(a) - other.rep.eval(a)).abs() <= combined;
        (-w..=w).all(|a| close(&BigInt::from(a)))
            && (0..DYADIC_PROBES).all(|j| {
                let a = BigInt::one() << j;
                close(&a) && close(&-a)
            })
    }

    pub fn to_decimal(&self, digits: u32) -> String {
        self.to_decimal_refined(digits, 40)
    }

    /// Decimal rendering with `|value - rendered| <= 10^-digits`.
    ///
    /// The evaluation index starts at the least power of two with
    /// `C / n <= 10^-digits / 2`. If the certified interval `f(n)/n ± C/n`
    /// pins down the truncated digits they are returned; otherwise `n` grows
    /// by up to `max_refine` further doublings, after which the midpoint is
    /// rounded to nearest.
    pub fn to_decimal_refined(&self, digits: u32, max_refine: u32) -> String {
        let c = self.bound();
        let scale = BigInt::from(10u32).pow(digits);
        let target = BigInt::from(2) * c * &scale;
        let mut n = BigInt::one();
        while n < target {
            n <<= 1;
        }
        let step = 8u32;
        let mut refined = 0u32;
        loop {
            let v = self.rep.eval(&n);
            let lo = &v - c;
            let hi = &v + c;
            let same_sign = lo.is_positive() || hi.is_negative() || (lo.is_zero() && hi.is_zero());
            if same_sign {
                let t_lo = (lo.abs() * &scale).div_floor(&n);
                let t_hi = (hi.abs() * &scale).div_floor(&n);
                if t_lo == t_hi {
                    return render(hi.is_negative(), &t_lo, digits);
                }
            }
            if refined >= max_refine {
                // round f(n)/n to nearest multiple of 10^-digits
                let two = BigInt::from(2);
                let twice = (&v * &scale * &two + &n).div_floor(&(&n * &two));
                return render(twice.is_negative(), &twice.abs(), digits);
            }
            let s = step.min(max_refine - refined);
            n <<= s;
            refined += s;
        }
    }
}

fn inverse(rep: &AlmostHom, witness: BigInt) -> AlmostHom {
    AlmostHom::inverse(rep, witness).expect("witness comes from a decided sign scan")
}

fn render(negative: bool, scaled: &BigInt, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let (int, frac) = scaled.div_rem(&scale);
    let sign = if negative && !scaled.is_zero() { "-" } else { "" };
    format!("{sign}{int}.{frac:0>width$}", width = digits as usize)
}

impl fmt::Display for EudoxusReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&EudoxusReal> for &EudoxusReal {
            type Output = EudoxusReal;
            fn $method(self, rhs: &EudoxusReal) -> EudoxusReal {
                EudoxusReal::$method(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &EudoxusReal {
    type Output = EudoxusReal;
    fn neg(self) -> EudoxusReal {
        EudoxusReal::neg(self)
    }
}
