//! Small seeded invariant suites, one per module, for a quick health check of
//! a build.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ahom::AlmostHom;
use crate::calculus::RatFunction;
use crate::eudoxus::EudoxusReal;
use crate::expr::{self, random_expression};
use crate::hyper::{Germ, HyperClass};
use crate::indexset::IndexSet;
use crate::lup::{eq_relation_contains, LupElement, Partition};
use crate::poly::Poly;
use crate::ufsim::{FilterState, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Suite {
    report: SuiteReport,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            report: SuiteReport {
                name,
                passed: 0,
                failures: Vec::new(),
            },
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.report.passed += 1;
        } else {
            self.report.failures.push(what());
        }
    }
}

pub const SUITES: [&str; 8] = [
    "ahom", "eudoxus", "indexset", "ufsim", "hyper", "calculus", "lup", "expr",
];

pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    SUITES.iter().map(|name| run_suite(name, seed).expect("known suite")).collect()
}

pub fn run_suite(name: &str, seed: u64) -> Option<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let report = match name {
        "ahom" => ahom(&mut rng),
        "eudoxus" => eudoxus(&mut rng),
        "indexset" => indexset(&mut rng),
        "ufsim" => ufsim(&mut rng),
        "hyper" => hyper(&mut rng),
        "calculus" => calculus(&mut rng),
        "lup" => lup(&mut rng),
        "expr" => expr_suite(&mut rng),
        _ => return None,
    };
    Some(report)
}

fn rand_rational(rng: &mut ChaCha8Rng, range: i64) -> BigRational {
    BigRational::new(rng.gen_range(-range..=range).into(), rng.gen_range(1..=range).into())
}

fn ahom(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut s = Suite::new("ahom");
    for _ in 0..10 {
        let f = AlmostHom::floor_linear(rng.gen_range(-50..50), rng.gen_range(1..20)).unwrap();
        let g = AlmostHom::floor_sqrt(rng.gen_range(0..30u32));
        for h in [f.add(&g), f.compose(&g), g.compose(&f), f.scale(rng.gen_range(-5..5)), f.neg()] {
            let r = h.verify_bound(60);
            s.check(r.ok, || format!("bound {} exceeded by {}", h.bound(), r.max_abs_discrepancy));
        }
    }
    s.report
}

fn eudoxus(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut s = Suite::new("eudoxus");
    let pick = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.3) {
            EudoxusReal::from_sqrt_int(rng.gen_range(0..20u32))
        } else {
            EudoxusReal::from_ratio(&rand_rational(rng, 30))
        }
    };
    for _ in 0..20 {
        let (a, b, c) = (pick(rng), pick(rng), pick(rng));
        s.check(a.add(&b).equals_within(&b.add(&a), 200), || "addition commutes".into());
        s.check(a.mul(&b).equals_within(&b.mul(&a), 200), || "multiplication commutes".into());
        s.check(
            a.mul(&b.add(&c)).equals_within(&a.mul(&b).add(&a.mul(&c)), 200),
            || "distributivity".into(),
        );
        s.check(a.sub(&a).equals_within(&EudoxusReal::from_int(0), 200), || "x - x = 0".into());
    }
    let two = EudoxusReal::from_sqrt_int(2u32);
    s.check(two.to_decimal(20) == "1.41421356237309504880", || two.to_decimal(20));
    let third = EudoxusReal::from_rational(1, 3).unwrap();
    let one = third.scale(3);
    s.check(
        third.recip(1 << 20).map(|r| r.equals_within(&EudoxusReal::from_int(3), 200)) == Ok(true),
        || "1/(1/3) = 3".into(),
    );
    s.check(one.equals_within(&EudoxusReal::from_int(1), 200), || "3 * 1/3 = 1".into());
    s.report
}

fn rand_set(rng: &mut ChaCha8Rng) -> IndexSet {
    let pre = (0..rng.gen_range(0..6)).map(|_| rng.gen_bool(0.5)).collect();
    let period = (0..rng.gen_range(1..7)).map(|_| rng.gen_bool(0.5)).collect();
    IndexSet::new(pre, period)
}

fn indexset(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut s = Suite::new("indexset");
    for _ in 0..100 {
        let (a, b) = (rand_set(rng), rand_set(rng));
        s.check(
            a.union(&b).complement() == a.complement().intersect(&b.complement()),
            || format!("De Morgan for {a}, {b}"),
        );
        s.check(a.complement().complement() == a, || format!("double complement of {a}"));
        s.check(a.to_string().parse::<IndexSet>().as_ref() == Ok(&a), || format!("round trip {a}"));
        let n = rng.gen_range(0..100);
        s.check(a.intersect(&b).member(n) == (a.member(n) && b.member(n)), || format!("member {n}"));
    }
    s.report
}

fn ufsim(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut s = Suite::new("ufsim");
    let mut st = FilterState::new();
    for _ in 0..200 {
        let q = rand_set(rng);
        let v = st.query(&q);
        s.check(st.meet().is_infinite(), || format!("meet finite after {q}"));
        if q.is_cofinite() {
            s.check(v == Verdict::Accepted, || format!("cofinite {q} rejected"));
        }
        if q.is_finite() {
            s.check(v == Verdict::Rejected, || format!("finite {q} accepted"));
        }
    }
    let back = FilterState::import(&st.export());
    s.check(back.as_ref() == Ok(&st), || "trace replay differs".into());
    s.report
}

fn rand_poly(rng: &mut ChaCha8Rng, deg: usize) -> Poly {
    Poly::from_ints((0..=deg).map(|_| rng.gen_range(-9i64..=9)))
}

fn hyper(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut s = Suite::new("hyper");
    let dx = Germ::dx();
    s.check(dx.classify() == HyperClass::PositiveInfinitesimal, || "class of dx".into());
    for k in [1i64, 10, 1000, 1_000_000] {
        let inv = Germ::from_real(BigRational::new(1.into(), k.into()));
        s.check(dx < inv && dx > Germ::from_int(0), || format!("0 < dx < 1/{k}"));
    }
    for _ in 0..20 {
        let (dn, dd) = (rng.gen_range(0..4), rng.gen_range(0..3));
        let num = rand_poly(rng, dn);
        let mut den = rand_poly(rng, dd);
        if den.is_zero() {
            den = Poly::from_ints([1]);
        }
        let Ok(g) = Germ::new(num, den) else { continue };
        let (dn, dd) = (
            g.num().degree().unwrap_or(0),
            g.den().degree().unwrap_or(0),
        );
        let threshold: u64 = g.sign_threshold().try_into().unwrap_or(0);
        let samples: Vec<_> = (threshold + 1..)
            .take(dn + dd + 2)
            .map(|n| (n, g.phi_component(n).expect("past every pole")))
            .collect();
        let back = Germ::from_components(&samples, dn, dd);
        s.check(back.as_ref() == Some(&g), || format!("reconstruct {g}"));
    }
    s.report
}

/// Coefficients of `p'`, computed termwise.
fn symbolic_derivative(p: &Poly) -> Poly {
    Poly::new(
        p.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
            .collect(),
    )
}

fn calculus(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut s = Suite::new("calculus");
    for _ in 0..30 {
        let deg = rng.gen_range(0..=8);
        let p = rand_poly(rng, deg);
        let x0 = rand_rational(rng, 20);
        let got = RatFunction::polynomial(p.clone()).derivative_at(&x0);
        let want = symbolic_derivative(&p).eval(&x0);
        s.check(got.as_ref() == Ok(&want), || format!("d/dx {p} at {x0}"));
    }
    s.report
}

fn lup(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut s = Suite::new("lup");
    for m in 1..6 {
        let p = Partition::residues(m);
        let c = LupElement::Germ(Germ::from_real(rand_rational(rng, 50)));
        s.check(eq_relation_contains(&c, &p) == Ok(true), || format!("constant on residues mod {m}"));
        let dx = LupElement::Germ(Germ::dx());
        s.check(eq_relation_contains(&dx, &p) == Ok(false), || format!("dx on residues mod {m}"));
    }
    s.report
}

fn expr_suite(rng: &mut ChaCha8Rng) -> SuiteReport {
    let mut s = Suite::new("expr");
    for _ in 0..100 {
        let src = random_expression(rng, 4);
        let round = expr::parse(&src).map(|ast| (expr::parse(&ast.to_string()), ast));
        s.check(
            matches!(&round, Ok((Ok(again), ast)) if again == ast),
            || format!("round trip {src:?}"),
        );
    }
    for _ in 0..200 {
        let len = rng.gen_range(0..24);
        let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
        let text = String::from_utf8_lossy(&bytes);
        let ok = match expr::parse(&text) {
            Ok(_) => true,
            Err(e) => e.offset <= text.len(),
        };
        s.check(ok, || format!("error offset out of range for {text:?}"));
    }
    s.report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        for r in run_all(7) {
            assert!(r.ok(), "{}: {:?}", r.name, r.failures);
            assert!(r.passed > 0);
        }
        assert!(run_suite("nope", 0).is_none());
    }
}
