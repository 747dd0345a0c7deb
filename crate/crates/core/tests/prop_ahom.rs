use eudoxus_core::AlmostHom;
use num_bigint::BigInt;
use proptest::prelude::*;

fn linear() -> impl Strategy<Value = AlmostHom> {
    (-20i64..=20, (1i64..=20).prop_flat_map(|q| prop_oneof![Just(q), Just(-q)]))
        .prop_map(|(p, q)| AlmostHom::floor_linear(p, q).unwrap())
}

fn sqrt() -> impl Strategy<Value = AlmostHom> {
    (0u32..=20).prop_map(AlmostHom::floor_sqrt)
}

fn leaf() -> impl Strategy<Value = AlmostHom> {
    prop_oneof![linear(), sqrt()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constructors_are_certified(f in leaf(), g in leaf(), m in -5i64..=5) {
        for h in [f.clone(), f.neg(), f.scale(m), f.add(&g), f.compose(&g)] {
            let r = h.verify_bound(200);
            prop_assert!(r.ok, "{h}: {} > {}", r.max_abs_discrepancy, h.bound());
        }
    }

    #[test]
    fn bound_propagation(f in leaf(), g in leaf()) {
        let sum = f.add(&g);
        prop_assert_eq!(sum.bound(), &(f.bound() + g.bound()));
        // for bound-1 leaves the scan gives max(|f(-1)|, |f(0)|, |f(1)|)
        let reach = (-1i64..=1).map(|e| f.eval_i64(e).magnitude().clone()).max().unwrap();
        let comp = f.compose(&g);
        prop_assert_eq!(
            comp.bound(),
            &(BigInt::from(2) * f.bound() + BigInt::from(reach))
        );
        prop_assert!(f.add(&g).compose(&g.neg()).verify_bound(60).ok);
    }

    #[test]
    fn floor_sum_identity(p in 1i64..=20, q in 1i64..=20, a in -500i64..500, b in -500i64..500) {
        let f = AlmostHom::floor_linear(p, q).unwrap();
        let d = f.discrepancy(&a.into(), &b.into());
        prop_assert!(d == BigInt::from(0) || d == BigInt::from(1));
    }

    #[test]
    fn floor_sqrt_is_odd(k in 0u32..=20, a in -100_000i64..100_000) {
        let f = AlmostHom::floor_sqrt(k);
        prop_assert_eq!(f.eval_i64(-a), -f.eval_i64(a));
    }
}
