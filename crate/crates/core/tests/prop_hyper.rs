use std::cmp::Ordering;

use eudoxus_core::{Germ, Poly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use proptest::prelude::*;

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-20i64..=20, 1..=max_deg + 1).prop_map(Poly::from_ints)
}

fn germ() -> impl Strategy<Value = Germ> {
    (poly(4), poly(4)).prop_filter_map("zero denominator", |(n, d)| Germ::new(n, d).ok())
}

fn finite_germ() -> impl Strategy<Value = Germ> {
    germ().prop_filter("infinite", |g| g.classify().is_finite())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ordered_field(x in germ(), y in germ(), z in germ()) {
        prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        if !x.is_zero() {
            prop_assert_eq!(x.mul(&x.recip().unwrap()), Germ::from_int(1));
        }
        prop_assert_eq!(x.compare(&y), y.compare(&x).reverse());
        if x.compare(&y) != Ordering::Greater && y.compare(&z) != Ordering::Greater {
            prop_assert_ne!(x.compare(&z), Ordering::Greater);
        }
        if x < y {
            prop_assert!(x.add(&z) < y.add(&z));
            if z > Germ::from_int(0) {
                prop_assert!(x.mul(&z) < y.mul(&z));
            }
        }
    }

    #[test]
    fn standard_part_is_a_ring_map(x in finite_germ(), y in finite_germ()) {
        let (sx, sy) = (x.standard_part().unwrap(), y.standard_part().unwrap());
        prop_assert_eq!(x.add(&y).standard_part().unwrap(), &sx + &sy);
        prop_assert_eq!(x.mul(&y).standard_part().unwrap(), &sx * &sy);
    }

    #[test]
    fn compare_matches_components(x in germ(), y in germ()) {
        let diff = x.sub(&y);
        let n0 = [x.sign_threshold(), y.sign_threshold(), diff.sign_threshold()]
            .into_iter()
            .max()
            .unwrap()
            .to_u64()
            .unwrap()
            + 1;
        let ord = x.compare(&y);
        for n in (n0..n0 + 1000).step_by(37) {
            let (a, b) = (x.phi_component(n).unwrap(), y.phi_component(n).unwrap());
            prop_assert_eq!(a.cmp(&b), ord, "index {}", n);
        }
    }

    #[test]
    fn reconstruction_from_components(g in germ()) {
        let dn = g.num().degree().unwrap_or(0);
        let dd = g.den().degree().unwrap_or(0);
        // the first deg + 2 indices that are not poles
        let samples: Vec<_> = (1u64..)
            .filter_map(|n| g.phi_component(n).ok().map(|v| (n, v)))
            .take(dn + dd + 2)
            .collect();
        prop_assert_eq!(Germ::from_components(&samples, dn, dd), Some(g));
    }

    #[test]
    fn realized_components_track_slopes(g in germ(), n in 1u64..200, k in 0u32..40) {
        if let Ok(q) = g.phi_component(n) {
            let x = g.realize_component(n).unwrap();
            let err = BigRational::new(x.bound().clone(), BigInt::one() << k);
            prop_assert!((x.slope_approx(k) - q).abs() <= err);
        }
    }
}
