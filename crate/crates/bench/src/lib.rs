//! Fixtures shared by the benchmarks.

use eudoxus_core::{EudoxusReal, Germ, IndexSet, Poly};

pub fn sqrt2() -> EudoxusReal {
    EudoxusReal::from_sqrt_int(2u32)
}

/// `sqrt 2 * sqrt 3 + 1/7`, a representative with nested rules.
pub fn composite_real() -> EudoxusReal {
    let seventh = EudoxusReal::from_rational(1, 7).expect("nonzero denominator");
    sqrt2().mul(&EudoxusReal::from_sqrt_int(3u32)).add(&seventh)
}

/// `(3 i^2 + 1) / (i^3 - 2)`.
pub fn germ_pair() -> (Germ, Germ) {
    let g = Germ::new(Poly::from_ints([1, 0, 3]), Poly::from_ints([-2, 0, 0, 1]))
        .expect("nonzero denominator");
    (g.clone(), g.add(&Germ::dx().pow(4).expect("dx is nonzero")))
}

pub fn dense_poly(degree: usize) -> Poly {
    Poly::from_ints((0..=degree as i64).map(|k| (k * 7919) % 23 - 11))
}

/// A deterministic stream of query sets mixing finite, cofinite and periodic.
pub fn query_sets(count: usize) -> Vec<IndexSet> {
    (0..count)
        .map(|i| match i % 4 {
            0 => IndexSet::tail(i % 17),
            1 => IndexSet::from_finite(&[i % 5, i % 11]),
            _ => IndexSet::residue_class(i % 7, 7 + i % 5),
        })
        .collect()
}
