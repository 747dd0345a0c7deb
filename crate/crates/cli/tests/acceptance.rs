//! Acceptance criteria, one line each. Runs without the libtest harness so
//! every verdict is printed even when earlier ones fail.

use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use eudoxus_core::expr::{parse, random_expression};
use eudoxus_core::lup::{eq_relation_contains, is_admissible};
use eudoxus_core::{
    AlmostHom, EudoxusReal, FilterState, GeneralRescaling, Germ, HyperClass, IndexSet,
    LimitFilterSpec, LupElement, Partition, Poly, RatFunction, Verdict,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

fn rational(rng: &mut ChaCha8Rng, range: i64) -> BigRational {
    BigRational::new(rng.gen_range(-range..=range).into(), rng.gen_range(1..=range).into())
}

/// Digits of sqrt(n) by the schoolbook pairwise long-division method.
fn sqrt_digits_oracle(n: u32, frac_digits: usize) -> String {
    let mut pairs: Vec<u32> = Vec::new();
    let mut int = n;
    let mut int_pairs = Vec::new();
    loop {
        int_pairs.push(int % 100);
        int /= 100;
        if int == 0 {
            break;
        }
    }
    int_pairs.reverse();
    pairs.extend(&int_pairs);
    pairs.extend(std::iter::repeat(0).take(frac_digits));
    let mut rem = BigInt::zero();
    let mut root = BigInt::zero();
    let mut digits = String::new();
    for (i, p) in pairs.iter().enumerate() {
        if i == int_pairs.len() {
            digits.push('.');
        }
        rem = rem * 100 + p;
        let mut d = 0u32;
        // largest d with (20 root + d) d <= rem
        while (&root * 20 + (d + 1)) * (d + 1) <= rem {
            d += 1;
        }
        rem -= (&root * 20 + d) * d;
        root = root * 10 + d;
        digits.push(char::from_digit(d, 10).unwrap());
    }
    digits
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_eudoxus"))
        .args(["digits", "sqrt(2)", "-p", "30"])
        .output()
        .map_err(|e| e.to_string())?;
    let got = String::from_utf8_lossy(&out.stdout).trim().to_string();
    let want = sqrt_digits_oracle(2, 30);
    ensure(out.status.success(), || format!("exit {:?}", out.status.code()))?;
    ensure(got == want, || format!("got {got}, oracle {want}"))?;
    let t = within(Duration::from_secs(10), start)?;
    Ok(format!("{got} matches the long-division oracle in {t:.2?}"))
}

fn known_real(rng: &mut ChaCha8Rng) -> EudoxusReal {
    if rng.gen_bool(0.3) {
        EudoxusReal::from_sqrt_int(rng.gen_range(0..=20u32))
    } else {
        EudoxusReal::from_ratio(&rational(rng, 50))
    }
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let window = 1000;
    let mut violations = 0usize;
    let mut checks = 0usize;
    for _ in 0..1000 {
        let (x, y, z) = (known_real(&mut rng), known_real(&mut rng), known_real(&mut rng));
        let pairs = [
            (x.add(&y).add(&z), x.add(&y.add(&z))),
            (x.add(&y), y.add(&x)),
            (x.mul(&y).mul(&z), x.mul(&y.mul(&z))),
            (x.mul(&y), y.mul(&x)),
            (x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z))),
        ];
        for (a, b) in &pairs {
            checks += 1;
            if !a.equals_within(b, window) {
                violations += 1;
            }
            // certificates of the composite representatives
            let p = BigInt::from(rng.gen_range(-10_000i64..10_000));
            let q = BigInt::from(rng.gen_range(-10_000i64..10_000));
            for r in [a, b] {
                let d = r.rep().eval(&(&p + &q)) - r.rep().eval(&p) - r.rep().eval(&q);
                if d.abs() > *r.bound() {
                    violations += 1;
                }
            }
        }
    }
    ensure(violations == 0, || format!("{violations} violations in {checks} checks"))?;
    let t = within(Duration::from_secs(60), start)?;
    Ok(format!("{checks} axiom checks on window 10^3, 0 violations, {t:.2?}"))
}

fn criterion_3() -> Check {
    let s = AlmostHom::floor_sqrt(2u32);
    let two = AlmostHom::floor_linear(2, 1).map_err(|e| e.to_string())?;
    let comp = s.compose(&s);
    let combined = comp.bound() + two.bound();
    let mut worst = BigInt::zero();
    for n in -10_000i64..=10_000 {
        let d = (comp.eval_i64(n) - two.eval_i64(n)).abs();
        ensure(d <= combined, || format!("n = {n}: |diff| = {d} > {combined}"))?;
        worst = worst.max(d);
    }
    Ok(format!("max |diff| = {worst} <= combined bound {combined} on |n| <= 10^4"))
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let k = 20;
    for _ in 0..200 {
        let q = BigRational::new(
            rng.gen_range(-1_000_000i64..=1_000_000).into(),
            rng.gen_range(1i64..=1_000_000).into(),
        );
        let x = EudoxusReal::from_ratio(&q);
        let err = (x.slope_approx(k) - &q).abs();
        let tol = BigRational::new(x.bound().clone(), BigInt::one() << k);
        ensure(err <= tol, || format!("{q}: error {err} > {tol}"))?;
    }
    Ok("200 rationals within 2^-20 * bound at k = 20".into())
}

fn criterion_5() -> Check {
    let dx = Germ::dx();
    let zero = Germ::from_int(0);
    ensure(dx > zero, || "dx <= 0".into())?;
    for k in 1..=1_000_000i64 {
        let inv = Germ::from_real(BigRational::new(1.into(), k.into()));
        if dx >= inv {
            return Err(format!("dx >= 1/{k}"));
        }
    }
    ensure(dx.classify() == HyperClass::PositiveInfinitesimal, || {
        format!("classify(dx) = {}", dx.classify())
    })?;
    Ok("0 < dx < 1/k for all k <= 10^6; class PositiveInfinitesimal".into())
}

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

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let deg = rng.gen_range(0..=8);
        let p = Poly::new((0..=deg).map(|_| rational(&mut rng, 30)).collect());
        let x0 = rational(&mut rng, 30);
        let got = RatFunction::polynomial(p.clone())
            .derivative_at(&x0)
            .map_err(|e| e.to_string())?;
        let want = symbolic_derivative(&p).eval(&x0);
        ensure(got == want, || format!("d/dx({p}) at {x0}: {got} != {want}"))?;
    }
    let t = within(Duration::from_secs(10), start)?;
    Ok(format!("100 polynomials, exact agreement, {t:.2?}"))
}

fn random_set(rng: &mut ChaCha8Rng) -> IndexSet {
    let pre: Vec<bool> = (0..rng.gen_range(0..8)).map(|_| rng.gen_bool(0.5)).collect();
    let period: Vec<bool> = match rng.gen_range(0..6) {
        // finite and cofinite sets
        0 => vec![false],
        1 => vec![true],
        _ => (0..rng.gen_range(1..9)).map(|_| rng.gen_bool(0.5)).collect(),
    };
    IndexSet::new(pre, period)
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut st = FilterState::new();
    let (mut cofinite, mut finite) = (0, 0);
    for i in 0..10_000 {
        let q = random_set(&mut rng);
        let v = st.query(&q);
        ensure(st.meet().is_infinite(), || format!("meet finite after query {i}"))?;
        if q.is_cofinite() {
            cofinite += 1;
            ensure(v == Verdict::Accepted, || format!("cofinite {q} rejected"))?;
        }
        if q.is_finite() {
            finite += 1;
            ensure(v == Verdict::Rejected, || format!("finite {q} accepted"))?;
        }
    }
    let replayed = FilterState::replay(st.log()).map_err(|e| e.to_string())?;
    ensure(replayed.export() == st.export() && replayed == st, || "replay differs".into())?;
    let imported = FilterState::import(&st.export()).map_err(|e| e.to_string())?;
    ensure(imported.export() == st.export(), || "trace import differs".into())?;
    Ok(format!(
        "10^4 queries ({} logged, {cofinite} cofinite, {finite} finite), replay identical",
        st.log().len()
    ))
}

fn random_germ(rng: &mut ChaCha8Rng) -> Germ {
    loop {
        let dn = rng.gen_range(0..=4);
        let dd = rng.gen_range(0..=3);
        let num = Poly::from_ints((0..=dn).map(|_| rng.gen_range(-20i64..=20)));
        let den = Poly::from_ints((0..=dd).map(|_| rng.gen_range(-20i64..=20)));
        if let Ok(g) = Germ::new(num, den) {
            return g;
        }
    }
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let g = random_germ(&mut rng);
        let dn = g.num().degree().unwrap_or(0);
        let dd = g.den().degree().unwrap_or(0);
        let samples: Vec<_> = (1u64..)
            .filter_map(|n| g.phi_component(n).ok().map(|v| (n, v)))
            .take(dn + dd + 2)
            .collect();
        let back = Germ::from_components(&samples, dn, dd);
        ensure(back.as_ref() == Some(&g), || format!("{g} reconstructed as {back:?}"))?;
        for n in [1u64, 2, 5, 17, 100, 1000] {
            let Ok(q) = g.phi_component(n) else { continue };
            let x = g.realize_component(n).map_err(|e| e.to_string())?;
            for k in [0u32, 10, 30] {
                let err = (x.slope_approx(k) - &q).abs();
                let tol = BigRational::new(x.bound().clone(), BigInt::one() << k);
                ensure(err <= tol, || format!("{g} at {n}, k = {k}: {err} > {tol}"))?;
            }
        }
    }
    Ok("100 germs reconstructed exactly; component slopes within bound".into())
}

fn random_partition(rng: &mut ChaCha8Rng) -> Partition {
    let base = Partition::residues(rng.gen_range(1..=12));
    let s = random_set(rng);
    let split = Partition::new(
        [s.clone(), s.complement()]
            .into_iter()
            .filter(|c| !c.is_empty())
            .collect(),
    )
    .expect("set and complement cover N");
    base.refine(&split)
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let err = |e: eudoxus_core::LupError| e.to_string();
    let mut partitions = 0;
    for _ in 0..100 {
        let p = random_partition(&mut rng);
        let g = LimitFilterSpec::new(vec![p.clone(), random_partition(&mut rng)]).map_err(err)?;
        let c = LupElement::Germ(Germ::from_real(rational(&mut rng, 100)));
        ensure(is_admissible(&c, &g).map_err(err)?, || format!("constant rejected for {p}"))?;
        let dx = LupElement::Germ(Germ::dx());
        ensure(!eq_relation_contains(&dx, &p).map_err(err)?, || format!("dx admissible for {p}"))?;
        ensure(!is_admissible(&dx, &g).map_err(err)?, || "dx admissible".into())?;
        partitions += 1;
    }
    let halves = LimitFilterSpec::new(vec![Partition::residues(2)]).map_err(err)?;
    let two_valued = |rng: &mut ChaCha8Rng| {
        LupElement::Rescaling(GeneralRescaling::periodic(
            vec![known_real(rng), known_real(rng)],
            "two-valued",
        ))
    };
    for _ in 0..200 {
        let (x, y) = (two_valued(&mut rng), two_valued(&mut rng));
        for z in [x.add(&y), x.mul(&y)] {
            ensure(is_admissible(&z, &halves).map_err(err)?, || format!("{z} not admissible"))?;
        }
    }
    Ok(format!(
        "constants admissible and dx inadmissible over {partitions} partitions; 200 pairs closed"
    ))
}

fn criterion_10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut crashes = 0;
    for _ in 0..10_000 {
        let len = rng.gen_range(0..64);
        let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
        let text = String::from_utf8_lossy(&bytes).into_owned();
        match panic::catch_unwind(AssertUnwindSafe(|| parse(&text))) {
            Err(_) => crashes += 1,
            Ok(Err(e)) if e.offset > text.len() => crashes += 1,
            Ok(_) => {}
        }
    }
    panic::set_hook(hook);
    ensure(crashes == 0, || format!("{crashes} crashes on random bytes"))?;
    for _ in 0..1000 {
        let src = random_expression(&mut rng, 5);
        let ast = parse(&src).map_err(|e| format!("{src:?}: {e}"))?;
        let again = parse(&ast.to_string()).map_err(|e| format!("{ast}: {e}"))?;
        ensure(again == ast, || format!("{src:?} printed as {ast}"))?;
    }
    Ok("10^4 byte strings without a crash; 10^3 expressions round-trip".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("digit extraction", criterion_1),
        ("field axioms", criterion_2),
        ("multiplication as composition", criterion_3),
        ("slope functional", criterion_4),
        ("infinitesimal ordering", criterion_5),
        ("derivative engine", criterion_6),
        ("ultrafilter simulator", criterion_7),
        ("component consistency", criterion_8),
        ("limit ultrapower", criterion_9),
        ("parser robustness", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(run).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail})", i + 1)
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

