//! Eventually periodic subsets of the natural numbers.
//!
//! A set is a finite preperiod followed by a repeating, nonempty period. The
//! class is closed under union, intersection and complement, and finiteness
//! and cofiniteness are read off the period.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::ParseError;

/// Stored canonically: the period is primitive and the preperiod cannot be
/// shortened, so equal sets have identical fields.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IndexSet {
    pre: Vec<bool>,
    period: Vec<bool>,
}

impl IndexSet {
    /// Panics on an empty period.
    pub fn new(pre: Vec<bool>, period: Vec<bool>) -> Self {
        assert!(!period.is_empty(), "period must be nonempty");
        let mut s = IndexSet { pre, period };
        s.canonicalize();
        s
    }

    pub fn empty() -> Self {
        IndexSet::new(vec![], vec![false])
    }

    pub fn all() -> Self {
        IndexSet::new(vec![], vec![true])
    }

    /// `{ n : n ≡ residue (mod modulus) }`.
    pub fn residue_class(residue: usize, modulus: usize) -> Self {
        assert!(modulus > 0);
        let period = (0..modulus).map(|j| j == residue % modulus).collect();
        IndexSet::new(vec![], period)
    }

    pub fn from_finite(members: &[usize]) -> Self {
        let len = members.iter().max().map_or(0, |m| m + 1);
        let mut pre = vec![false; len];
        for &m in members {
            pre[m] = true;
        }
        IndexSet::new(pre, vec![false])
    }

    /// `{ n : n >= start }`.
    pub fn tail(start: usize) -> Self {
        IndexSet::new(vec![false; start], vec![true])
    }

    pub fn pre(&self) -> &[bool] {
        &self.pre
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    pub fn member(&self, n: usize) -> bool {
        match n.checked_sub(self.pre.len()) {
            None => self.pre[n],
            Some(k) => self.period[k % self.period.len()],
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        IndexSet::new(
            self.pre.iter().map(|b| !b).collect(),
            self.period.iter().map(|b| !b).collect(),
        )
    }

    pub fn is_infinite(&self) -> bool {
        self.period.iter().any(|&b| b)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn is_cofinite(&self) -> bool {
        self.period.iter().all(|&b| b)
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && !self.pre.iter().any(|&b| b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// Members below `limit`.
    pub fn members_below(&self, limit: usize) -> impl Iterator<Item = usize> + '_ {
        (0..limit).filter(move |&n| self.member(n))
    }

    /// Aligns both operands on preperiod `max` and period `lcm`.
    fn zip(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let pre_len = self.pre.len().max(other.pre.len());
        let per_len = self.period.len().lcm(&other.period.len());
        let pre = (0..pre_len)
            .map(|n| op(self.member(n), other.member(n)))
            .collect();
        let period = (pre_len..pre_len + per_len)
            .map(|n| op(self.member(n), other.member(n)))
            .collect();
        IndexSet::new(pre, period)
    }

    fn canonicalize(&mut self) {
        let len = self.period.len();
        if let Some(d) = (1..len)
            .filter(|d| len % d == 0)
            .find(|&d| (d..len).all(|i| self.period[i] == self.period[i - d]))
        {
            self.period.truncate(d);
        }
        while let Some(&last) = self.pre.last() {
            if last != *self.period.last().expect("nonempty period") {
                break;
            }
            self.pre.pop();
            self.period.rotate_right(1);
        }
    }

    /// Parses `pre:<bits>;per:<bits>` starting at `src[start..]` and returns the
    /// set with the offset one past the last consumed byte.
    pub fn parse_prefix(src: &str, start: usize) -> Result<(Self, usize), ParseError> {
        let bytes = src.as_bytes();
        let mut pos = start;
        let expect = |pos: &mut usize, lit: &str| {
            if src[*pos..].starts_with(lit) {
                *pos += lit.len();
                Ok(())
            } else {
                Err(ParseError::new(*pos, format!("'{lit}'")))
            }
        };
        let bits = |pos: &mut usize| {
            let from = *pos;
            while *pos < bytes.len() && (bytes[*pos] == b'0' || bytes[*pos] == b'1') {
                *pos += 1;
            }
            bytes[from..*pos].iter().map(|&b| b == b'1').collect::<Vec<_>>()
        };
        expect(&mut pos, "pre:")?;
        let pre = bits(&mut pos);
        expect(&mut pos, ";per:")?;
        let period = bits(&mut pos);
        if period.is_empty() {
            return Err(ParseError::new(pos, "nonempty period bits"));
        }
        Ok((IndexSet::new(pre, period), pos))
    }
}

fn bits_str(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pre:{};per:{}", bits_str(&self.pre), bits_str(&self.period))
    }
}

impl FromStr for IndexSet {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (set, end) = IndexSet::parse_prefix(s, 0)?;
        if end != s.len() {
            return Err(ParseError::new(end, "end of input"));
        }
        Ok(set)
    }
}
