use rand::Rng;

/// A random string in the expression grammar (syntax only; sorts may mix).
/// Nesting is bounded by `depth`.
pub fn random_expression<R: Rng + ?Sized>(rng: &mut R, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.3) {
        return random_atom(rng);
    }
    match rng.gen_range(0..9) {
        0 => format!("{} + {}", random_expression(rng, depth - 1), random_expression(rng, depth - 1)),
        1 => format!("{}-{}", random_expression(rng, depth - 1), random_expression(rng, depth - 1)),
        2 => format!("{} * {}", random_expression(rng, depth - 1), random_expression(rng, depth - 1)),
        3 => format!("{}/{}", random_expression(rng, depth - 1), random_expression(rng, depth - 1)),
        4 => format!("({})^{}", random_expression(rng, depth - 1), rng.gen_range(0..6)),
        5 => format!("{}^{}", random_atom(rng), rng.gen_range(0..6)),
        6 => format!("st({})", random_expression(rng, depth - 1)),
        7 => format!("classify({})", random_expression(rng, depth - 1)),
        _ => format!("( {} )", random_expression(rng, depth - 1)),
    }
}

fn random_atom<R: Rng + ?Sized>(rng: &mut R) -> String {
    match rng.gen_range(0..7) {
        0 => rng.gen_range(0..1000u32).to_string(),
        1 => format!("{}/{}", rng.gen_range(0..100u32), rng.gen_range(1..100u32)),
        2 => format!("sqrt({})", rng.gen_range(0..50u32)),
        3 => "dx".into(),
        4 => "omega".into(),
        5 => "x".into(),
        _ => "123456789012345678901234567890".into(),
    }
}
