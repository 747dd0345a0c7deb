use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{HyperClass, HyperError};
use crate::error::ParseError;
use crate::eudoxus::EudoxusReal;
use crate::poly::Poly;

/// A hyperreal whose component at index `i` is the Eudoxus real of slope
/// `num(i) / den(i)`, i.e. the rescaling `a -> floor(a num(i) / den(i))`.
///
/// Numerator and denominator are coprime integer polynomials with joint
/// content 1 and a positive leading coefficient in the denominator, so equal
/// germs have identical fields.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Germ {
    num: Poly,
    den: Poly,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl Germ {
    pub fn new(num: Poly, den: Poly) -> Result<Self, HyperError> {
        if den.is_zero() {
            return Err(HyperError::DivisionByZeroGerm);
        }
        if num.is_zero() {
            return Ok(Germ {
                num,
                den: Poly::constant(BigRational::one()),
            });
        }
        let g = num.gcd(&den);
        let mut num = num.div_rem(&g).0;
        let mut den = den.div_rem(&g).0;
        let clear = rat(num.denominator_lcm().lcm(&den.denominator_lcm()));
        num = num.scale(&clear);
        den = den.scale(&clear);
        let mut content = rat(num.numerator_gcd().gcd(&den.numerator_gcd()));
        if den.lead().is_negative() {
            content = -content;
        }
        let inv = BigRational::one() / content;
        Ok(Germ {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    /// The infinitesimal with component slopes `1/i`.
    pub fn dx() -> Self {
        Germ::new(Poly::from_ints([1]), Poly::var()).expect("nonzero denominator")
    }

    /// The infinite element with component slopes `i`.
    pub fn omega() -> Self {
        Germ::new(Poly::var(), Poly::from_ints([1])).expect("nonzero denominator")
    }

    pub fn from_real(q: BigRational) -> Self {
        Germ::new(Poly::constant(q), Poly::from_ints([1])).expect("nonzero denominator")
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Germ::from_real(rat(n))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some(q)` iff the germ is the constant `q`.
    pub fn as_constant(&self) -> Option<BigRational> {
        (self.num.is_constant() && self.den.is_constant())
            .then(|| self.num.constant_term() / self.den.constant_term())
    }

    pub fn add(&self, other: &Self) -> Self {
        Germ::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
        .expect("product of nonzero denominators")
    }

    pub fn neg(&self) -> Self {
        Germ {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Germ::new(&self.num * &other.num, &self.den * &other.den)
            .expect("product of nonzero denominators")
    }

    pub fn recip(&self) -> Result<Self, HyperError> {
        Germ::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, HyperError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, exp: i64) -> Result<Self, HyperError> {
        let base = if exp < 0 { self.recip()? } else { self.clone() };
        let e = u32::try_from(exp.unsigned_abs()).map_err(|_| HyperError::ExponentTooLarge)?;
        Ok(Germ::new(base.num.pow(e), base.den.pow(e)).expect("nonzero denominator"))
    }

    /// Eventual sign of `self - other`. Every nonprincipal ultrafilter agrees,
    /// since the set where the sign differs is finite.
    pub fn compare(&self, other: &Self) -> Ordering {
        let diff = self.sub(other);
        diff.num.lead().cmp(&BigRational::zero())
    }

    /// An index beyond which neither the numerator nor the denominator has a
    /// root, so component slopes are defined and have the eventual sign.
    pub fn sign_threshold(&self) -> BigInt {
        self.num
            .root_bound()
            .max(self.den.root_bound())
            .ceil()
            .to_integer()
    }

    /// `deg(num) - deg(den)`; `None` for the zero germ.
    pub fn order(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        Some(dn - self.den.degree().expect("nonzero denominator") as i64)
    }

    /// `(c, d)` with `r(i) ~ c i^d` as `i -> oo`.
    pub fn leading_term(&self) -> Option<(BigRational, i64)> {
        Some((self.num.lead() / self.den.lead(), self.order()?))
    }

    pub fn classify(&self) -> HyperClass {
        let Some((lead, d)) = self.leading_term() else {
            return HyperClass::Zero;
        };
        let positive = lead.is_positive();
        match d.cmp(&0) {
            Ordering::Less if positive => HyperClass::PositiveInfinitesimal,
            Ordering::Less => HyperClass::NegativeInfinitesimal,
            Ordering::Equal => HyperClass::AppreciableFinite(lead),
            Ordering::Greater if positive => HyperClass::PositiveInfinite,
            Ordering::Greater => HyperClass::NegativeInfinite,
        }
    }

    /// The real infinitely close to a finite germ: `lim r(i)`.
    pub fn standard_part(&self) -> Result<BigRational, HyperError> {
        match self.leading_term() {
            None => Ok(BigRational::zero()),
            Some((_, d)) if d < 0 => Ok(BigRational::zero()),
            Some((lead, 0)) => Ok(lead),
            Some(_) => Err(HyperError::InfiniteElement),
        }
    }

    /// Slope of component `n`.
    pub fn phi_component(&self, n: u64) -> Result<BigRational, HyperError> {
        let x = rat(n);
        let d = self.den.eval(&x);
        if d.is_zero() {
            return Err(HyperError::PoleAtIndex(n));
        }
        Ok(self.num.eval(&x) / d)
    }

    /// Component `n` as a Eudoxus real with representative
    /// `a -> floor(a num(n) / den(n))`.
    pub fn realize_component(&self, n: u64) -> Result<EudoxusReal, HyperError> {
        Ok(EudoxusReal::from_ratio(&self.phi_component(n)?))
    }

    /// Rebuilds a germ with `deg num <= num_deg`, `deg den <= den_deg` from
    /// component slopes. Needs at least `num_deg + den_deg + 1` samples at
    /// distinct indices; returns `None` if no such germ fits.
    pub fn from_components(
        samples: &[(u64, BigRational)],
        num_deg: usize,
        den_deg: usize,
    ) -> Option<Germ> {
        let cols = num_deg + den_deg + 2;
        // unknowns: a_0..a_m, b_0..b_k with sum a_j x^j - y sum b_j x^j = 0
        let mut rows: Vec<Vec<BigRational>> = samples
            .iter()
            .map(|(n, y)| {
                let x = rat(*n);
                let mut row = Vec::with_capacity(cols);
                let mut p = BigRational::one();
                for _ in 0..=num_deg {
                    row.push(p.clone());
                    p *= &x;
                }
                let mut p = BigRational::one();
                for _ in 0..=den_deg {
                    row.push(-(y * &p));
                    p *= &x;
                }
                row
            })
            .collect();
        let pivots = row_reduce(&mut rows, cols);
        let free = (0..cols).find(|c| !pivots.contains(c))?;
        let mut sol = vec![BigRational::zero(); cols];
        sol[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            sol[pc] = -rows[r][free].clone();
        }
        let num = Poly::new(sol[..=num_deg].to_vec());
        let den = Poly::new(sol[num_deg + 1..].to_vec());
        let g = Germ::new(num, den).ok()?;
        samples
            .iter()
            .all(|(n, y)| g.phi_component(*n).ok().as_ref() == Some(y))
            .then_some(g)
    }
}

/// Reduced row echelon form in place; returns pivot columns by row.
fn row_reduce(rows: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / &rows[r][c];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

impl PartialOrd for Germ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Germ {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.num.display_with("i");
        if self.den.is_constant() && self.den.lead().is_one() {
            write!(f, "({num})")
        } else {
            write!(f, "({num})/({})", self.den.display_with("i"))
        }
    }
}

impl FromStr for Germ {
    type Err = ParseError;

    /// Accepts `poly`, `(poly)` or `(poly)/(poly)` in the variable `i`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        let (num_src, den_src, den_at) = match s.find(")/(") {
            Some(k) if s.starts_with('(') && s.ends_with(')') => {
                (&s[1..k], Some(&s[k + 3..s.len() - 1]), k + 3)
            }
            _ if s.starts_with('(') && s.ends_with(')') => (&s[1..s.len() - 1], None, 0),
            _ => (s, None, 0),
        };
        let base = usize::from(s.starts_with('('));
        let num = Poly::parse_with(num_src, "i")
            .map_err(|e| ParseError::new(e.offset + base, e.expected))?;
        let den = match den_src {
            Some(d) => Poly::parse_with(d, "i")
                .map_err(|e| ParseError::new(e.offset + den_at, e.expected))?,
            None => Poly::from_ints([1]),
        };
        Germ::new(num, den).map_err(|_| ParseError::new(den_at, "nonzero denominator"))
    }
}

impl HyperClass {
    pub fn is_finite(&self) -> bool {
        !matches!(self, HyperClass::PositiveInfinite | HyperClass::NegativeInfinite)
    }

    pub fn is_infinitesimal_or_zero(&self) -> bool {
        matches!(
            self,
            HyperClass::Zero | HyperClass::PositiveInfinitesimal | HyperClass::NegativeInfinitesimal
        )
    }
}

impl fmt::Display for HyperClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HyperClass::Zero => f.write_str("Zero"),
            HyperClass::PositiveInfinitesimal => f.write_str("PositiveInfinitesimal"),
            HyperClass::NegativeInfinitesimal => f.write_str("NegativeInfinitesimal"),
            HyperClass::AppreciableFinite(_) => f.write_str("AppreciableFinite"),
            HyperClass::PositiveInfinite => f.write_str("PositiveInfinite"),
            HyperClass::NegativeInfinite => f.write_str("NegativeInfinite"),
        }
    }
}

pub(crate) fn threshold_u64(g: &Germ) -> Option<u64> {
    g.sign_threshold().to_u64()
}
