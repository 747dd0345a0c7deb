use eudoxus_core::expr::{parse, random_expression, tokenize};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn generated_expressions_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = random_expression(&mut rng, 5);
        let ast = parse(&src).unwrap();
        let printed = ast.to_string();
        prop_assert_eq!(parse(&printed).unwrap(), ast, "{} -> {}", src, printed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..40)) {
        let text = String::from_utf8_lossy(&bytes);
        for t in tokenize(&text) {
            prop_assert!(t.offset + t.len <= text.len());
        }
        if let Err(e) = parse(&text) {
            prop_assert!(e.offset <= text.len());
        }
    }

    #[test]
    fn grammar_alphabet_never_panics(s in "[0-9+*/^() -]{0,30}|[a-z0-9()+^/*]{0,30}") {
        if let Err(e) = parse(&s) {
            prop_assert!(e.offset <= s.len());
        }
    }
}
