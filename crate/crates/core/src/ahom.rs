//! Almost homomorphisms `Z -> Z` with certified discrepancy bounds.
//!
//! A representative is a closed-form rule tree. Every node carries an integer
//! `C` such that `|f(p+q) - f(p) - f(q)| <= C` for all integers `p`, `q`.
//! All bounds are derived at construction time and never change.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// Largest `|e|` range that `compose` scans directly when bounding the outer
/// rule on the inner rule's discrepancy range.
const DIRECT_SCAN_LIMIT: u64 = 1 << 14;

static CACHE_CAPACITY: AtomicUsize = AtomicUsize::new(0);

/// Caps the number of memoised values per rule node. `None` means unbounded
/// (the default). When a node's table reaches the cap it is cleared.
pub fn set_cache_capacity(cap: Option<usize>) {
    CACHE_CAPACITY.store(cap.unwrap_or(0), Ordering::Relaxed);
}

pub fn cache_capacity() -> Option<usize> {
    match CACHE_CAPACITY.load(Ordering::Relaxed) {
        0 => None,
        n => Some(n),
    }
}

#[derive(Debug)]
pub enum Rule {
    /// `a -> floor(num * a / den)`, `den > 0`.
    FloorLinear { num: BigInt, den: BigInt },
    /// `a -> sign(a) * isqrt(k * a^2)`.
    FloorSqrt { k: BigInt },
    Sum(AlmostHom, AlmostHom),
    Neg(AlmostHom),
    /// `a -> outer(inner(a))`.
    Compose(AlmostHom, AlmostHom),
    IntScale(BigInt, AlmostHom),
    /// Odd extension of `p -> a`, where `a >= 0` is the bisection crossing
    /// `inner(a - 1) < p <= inner(a)`. `witness` is an index with
    /// `inner(witness) > inner.bound()`, which certifies a positive slope.
    Inverse { inner: AlmostHom, witness: BigInt },
}

struct Node {
    rule: Rule,
    bound: BigInt,
    cache: Mutex<HashMap<BigInt, BigInt>>,
}

/// A certified almost homomorphism. Cheap to clone; immutable.
#[derive(Clone)]
pub struct AlmostHom(Arc<Node>);

impl fmt::Debug for AlmostHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlmostHom({self}, C={})", self.0.bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub max_abs_discrepancy: BigInt,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AhomError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("inverse witness {witness} does not certify a positive slope")]
    BadWitness { witness: BigInt },
}

impl AlmostHom {
    fn from_rule(rule: Rule, bound: BigInt) -> Self {
        debug_assert!(bound.is_positive());
        AlmostHom(Arc::new(Node {
            rule,
            bound,
            cache: Mutex::new(HashMap::new()),
        }))
    }

    pub fn floor_linear(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, AhomError> {
        let mut num = num.into();
        let mut den = den.into();
        if den.is_zero() {
            return Err(AhomError::ZeroDenominator);
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Ok(Self::from_rule(Rule::FloorLinear { num, den }, BigInt::one()))
    }

    pub fn floor_sqrt(k: impl Into<BigUint>) -> Self {
        let k = BigInt::from_biguint(Sign::Plus, k.into());
        Self::from_rule(Rule::FloorSqrt { k }, BigInt::one())
    }

    pub fn add(&self, other: &AlmostHom) -> AlmostHom {
        let bound = self.bound() + other.bound();
        Self::from_rule(Rule::Sum(self.clone(), other.clone()), bound)
    }

    pub fn neg(&self) -> AlmostHom {
        Self::from_rule(Rule::Neg(self.clone()), self.bound().clone())
    }

    pub fn scale(&self, m: impl Into<BigInt>) -> AlmostHom {
        let m = m.into();
        let bound = (self.bound() * m.abs()).max(BigInt::one());
        Self::from_rule(Rule::IntScale(m, self.clone()), bound)
    }

    /// `self ∘ inner`.
    ///
    /// With `e = d_inner(p, q)`, `d(p, q) = self(g(p) + g(q) + e) - self(g(p)) - self(g(q))`,
    /// so `|d| <= 2 C_self + max_{|e| <= C_inner} |self(e)|`.
    pub fn compose(&self, inner: &AlmostHom) -> AlmostHom {
        let reach = self.max_abs_on(inner.bound());
        let bound = BigInt::from(2) * self.bound() + reach;
        Self::from_rule(Rule::Compose(self.clone(), inner.clone()), bound)
    }

    /// Inverse rule of an inner rule with positive slope. `witness` must satisfy
    /// `inner(witness) > C_inner`.
    ///
    /// With `r_lo = (inner(w) - C) / w <= slope` and `D = |inner(1)| + C`, every
    /// value satisfies `|g(p) - p / slope| <= (C + D) / r_lo`, so
    /// `|d_g| <= 3 (C + D) / r_lo`.
    pub fn inverse(inner: &AlmostHom, witness: BigInt) -> Result<AlmostHom, AhomError> {
        let c = inner.bound().clone();
        if !witness.is_positive() || inner.eval(&witness) <= c {
            return Err(AhomError::BadWitness { witness });
        }
        let r_lo = BigRational::new(inner.eval(&witness) - &c, witness.clone());
        let d = inner.eval(&BigInt::one()).abs() + &c;
        let e = BigRational::from_integer(c + d) / r_lo;
        let bound = (e * BigInt::from(3)).floor().to_integer().max(BigInt::one());
        Ok(Self::from_rule(
            Rule::Inverse {
                inner: inner.clone(),
                witness,
            },
            bound,
        ))
    }

    pub fn rule(&self) -> &Rule {
        &self.0.rule
    }

    pub fn bound(&self) -> &BigInt {
        &self.0.bound
    }

    pub fn eval(&self, a: &BigInt) -> BigInt {
        if let Some(v) = self.0.cache.lock().expect("cache poisoned").get(a) {
            return v.clone();
        }
        let v = self.eval_uncached(a);
        let mut cache = self.0.cache.lock().expect("cache poisoned");
        if let Some(cap) = cache_capacity() {
            if cache.len() >= cap {
                cache.clear();
            }
        }
        cache.insert(a.clone(), v.clone());
        v
    }

    pub fn eval_i64(&self, a: i64) -> BigInt {
        self.eval(&BigInt::from(a))
    }

    fn eval_uncached(&self, a: &BigInt) -> BigInt {
        match &self.0.rule {
            Rule::FloorLinear { num, den } => (num * a).div_floor(den),
            Rule::FloorSqrt { k } => {
                let r = (k * a * a).sqrt();
                if a.is_negative() {
                    -r
                } else {
                    r
                }
            }
            Rule::Sum(f, g) => f.eval(a) + g.eval(a),
            Rule::Neg(f) => -f.eval(a),
            Rule::Compose(f, g) => f.eval(&g.eval(a)),
            Rule::IntScale(m, f) => m * f.eval(a),
            Rule::Inverse { inner, .. } => {
                if a.is_negative() {
                    -crossing(inner, &-a)
                } else {
                    crossing(inner, a)
                }
            }
        }
    }

    /// `f(p+q) - f(p) - f(q)`.
    ///
    /// Panics if the result exceeds the certified bound: that is a bug in a
    /// constructor, not a recoverable condition.
    pub fn discrepancy(&self, p: &BigInt, q: &BigInt) -> BigInt {
        let d = self.raw_discrepancy(p, q);
        if d.abs() > *self.bound() {
            panic!(
                "certificate violation: |d({p}, {q})| = {} exceeds bound {} for {self}",
                d.abs(),
                self.bound()
            );
        }
        d
    }

    fn raw_discrepancy(&self, p: &BigInt, q: &BigInt) -> BigInt {
        self.eval(&(p + q)) - self.eval(p) - self.eval(q)
    }

    /// Exhaustive audit of the certificate over `p, q in [-window, window]`.
    pub fn verify_bound(&self, window: u64) -> BoundReport {
        let w = window.max(1) as i64;
        // values of f on [-2w, 2w], indexed by a + 2w
        let values: Vec<BigInt> = (-2 * w..=2 * w).map(|a| self.eval_i64(a)).collect();
        let at = |a: i64| &values[(a + 2 * w) as usize];
        let mut max = BigInt::zero();
        for p in -w..=w {
            for q in -w..=w {
                let d = (at(p + q) - at(p) - at(q)).abs();
                if d > max {
                    max = d;
                }
            }
        }
        let ok = max <= *self.bound();
        BoundReport {
            max_abs_discrepancy: max,
            ok,
        }
    }

    /// Upper bound for `max_{|e| <= reach} |f(e)|`; exact for small `reach`.
    fn max_abs_on(&self, reach: &BigInt) -> BigInt {
        match reach.to_u64() {
            Some(r) if r <= DIRECT_SCAN_LIMIT => {
                let r = r as i64;
                (-r..=r)
                    .map(|e| self.eval_i64(e).abs())
                    .max()
                    .unwrap_or_default()
            }
            // |f(e)| <= |slope| |e| + C and |slope| <= |f(1)| + C
            _ => {
                let c = self.bound();
                (self.eval(&BigInt::one()).abs() + c) * reach + c
            }
        }
    }
}

/// Smallest-found `a >= 0` with `f(a - 1) < p <= f(a)` by exponential search
/// and bisection; `0` when `f(0) >= p`.
fn crossing(f: &AlmostHom, p: &BigInt) -> BigInt {
    if f.eval(&BigInt::zero()) >= *p {
        return BigInt::zero();
    }
    let mut lo = BigInt::zero();
    let mut hi = BigInt::one();
    while f.eval(&hi) < *p {
        lo = hi.clone();
        hi <<= 1;
    }
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if f.eval(&mid) >= *p {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

impl fmt::Display for AlmostHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.rule {
            Rule::FloorLinear { num, den } => write!(f, "linear({num}/{den})"),
            Rule::FloorSqrt { k } => write!(f, "sqrt({k})"),
            Rule::Sum(a, b) => write!(f, "add({a},{b})"),
            Rule::Neg(a) => write!(f, "neg({a})"),
            Rule::Compose(a, b) => write!(f, "compose({a},{b})"),
            Rule::IntScale(m, a) => write!(f, "scale({m},{a})"),
            Rule::Inverse { inner, witness } => write!(f, "inverse({inner},{witness})"),
        }
    }
}

impl FromStr for AlmostHom {
    type Err = ParseError;

    /// Parses the canonical form produced by `Display`. Bounds are recomputed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = RuleParser { src: s, pos: 0 };
        let f = p.rule()?;
        if p.pos != s.len() {
            return Err(ParseError::new(p.pos, "end of input"));
        }
        Ok(f)
    }
}

struct RuleParser<'a> {
    src: &'a str,
    pos: usize,
}

impl RuleParser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(ParseError::new(self.pos, format!("'{lit}'")))
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        if end < bytes.len() && bytes[end] == b'-' {
            end += 1;
        }
        let digits = end;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end == digits {
            return Err(ParseError::new(start, "integer"));
        }
        self.pos = end;
        Ok(self.src[start..end].parse().expect("validated digits"))
    }

    fn rule(&mut self) -> Result<AlmostHom, ParseError> {
        let start = self.pos;
        let name_len = self
            .rest()
            .find(|c: char| !c.is_ascii_lowercase())
            .unwrap_or(self.rest().len());
        let name = &self.src[start..start + name_len];
        self.pos += name_len;
        self.expect("(")?;
        let f = match name {
            "linear" => {
                let num = self.int()?;
                self.expect("/")?;
                let den_pos = self.pos;
                let den = self.int()?;
                if !den.is_positive() {
                    return Err(ParseError::new(den_pos, "positive denominator"));
                }
                AlmostHom::floor_linear(num, den).expect("positive denominator")
            }
            "sqrt" => {
                let k_pos = self.pos;
                let k = self.int()?;
                let k = k
                    .to_biguint()
                    .ok_or_else(|| ParseError::new(k_pos, "nonnegative integer"))?;
                AlmostHom::floor_sqrt(k)
            }
            "add" | "compose" => {
                let a = self.rule()?;
                self.expect(",")?;
                let b = self.rule()?;
                if name == "add" {
                    a.add(&b)
                } else {
                    a.compose(&b)
                }
            }
            "neg" => self.rule()?.neg(),
            "scale" => {
                let m = self.int()?;
                self.expect(",")?;
                self.rule()?.scale(m)
            }
            "inverse" => {
                let inner = self.rule()?;
                self.expect(",")?;
                let w_pos = self.pos;
                let w = self.int()?;
                AlmostHom::inverse(&inner, w)
                    .map_err(|_| ParseError::new(w_pos, "index certifying a positive slope"))?
            }
            _ => {
                return Err(ParseError::new(
                    start,
                    "one of linear, sqrt, add, neg, compose, scale, inverse",
                ))
            }
        };
        self.expect(")")?;
        Ok(f)
    }
}
