use eudoxus_core::expr::{self, Ast, Context, Evaluator, ExprError, Value};
use eudoxus_core::lup::{eq_relation_contains, LupElement, LupError, Partition};
use eudoxus_core::selftest;
use eudoxus_core::{EudoxusReal, Germ, HyperClass, IndexSet};
use num_rational::BigRational;
use serde_json::json;

use crate::config::Config;
use crate::{state, Diagnostic, Failure, Outcome};

fn expr_failure(e: ExprError, used: u64) -> Failure {
    let f = match &e {
        ExprError::Parse(_) => Failure::usage(e.to_string()),
        ExprError::Budget(_) => Failure::budget(e.to_string()),
        ExprError::Sort(_) | ExprError::VarOutsideDerive | ExprError::Domain(_) => {
            Failure::domain(e.to_string())
        }
    };
    f.with_used(used)
}

fn parse_expr(src: &str) -> Result<Ast, Failure> {
    expr::parse(src).map_err(|e| expr_failure(e.into(), 0))
}

fn evaluate(src: &str, ctx: Context, cfg: &Config) -> Result<(Value, u64), Failure> {
    let ast = parse_expr(src)?;
    let mut ev = Evaluator::new(cfg.budget);
    match ev.eval(&ast, ctx) {
        Ok(v) => Ok((v, ev.budget_used())),
        Err(e) => Err(expr_failure(e, ev.budget_used())),
    }
}

fn outcome(text: String, result: serde_json::Value, budget_used: u64) -> Outcome {
    Outcome {
        text,
        result,
        diagnostics: Vec::new(),
        budget_used,
        code: 0,
    }
}

pub fn digits(src: &str, precision: u32, cfg: &Config) -> Result<Outcome, Failure> {
    let (value, used) = evaluate(src, Context::Real, cfg)?;
    let Value::Real(x) = value else {
        unreachable!("real context yields reals")
    };
    let rendered = x.to_decimal_refined(precision, cfg.max_k);
    Ok(outcome(
        format!("{rendered}\n"),
        json!({ "value": rendered, "precision": precision }),
        used,
    ))
}

fn leading(g: &Germ) -> Option<(String, i64)> {
    g.leading_term().map(|(c, d)| (c.to_string(), d))
}

pub fn hyper_eval(src: &str, cfg: &Config) -> Result<Outcome, Failure> {
    let (value, used) = evaluate(src, Context::Hyper, cfg)?;
    let (g, class) = match value {
        Value::Hyper(g) => {
            let c = g.classify();
            (g, c)
        }
        Value::Class(g, c) => (g, c),
        _ => unreachable!("hyper context yields germs"),
    };
    let st = g.standard_part().ok();
    let lead = leading(&g);
    let mut text = format!("value: {g}\nclass: {class}\n");
    match &st {
        Some(s) => text.push_str(&format!("st: {s}\n")),
        None => text.push_str("st: none (infinite)\n"),
    }
    match &lead {
        Some((c, d)) => text.push_str(&format!("leading: {c}*i^{d}\n")),
        None => text.push_str("leading: 0\n"),
    }
    let appreciable = match &class {
        HyperClass::AppreciableFinite(v) => Some(v.to_string()),
        _ => None,
    };
    let mut out = outcome(
        text,
        json!({
            "value": g.to_string(),
            "class": class.to_string(),
            "appreciable_value": appreciable,
            "standard_part": st.map(|s| s.to_string()),
            "leading": lead.map(|(c, d)| json!({ "coefficient": c, "exponent": d })),
        }),
        used,
    );
    if !class.is_finite() {
        out.diagnostics.push(note("infinite element: no standard part"));
    }
    Ok(out)
}

fn note(message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        level: "note",
        message: message.into(),
    }
}

pub fn derive(src: &str, at: &str, cfg: &Config) -> Result<Outcome, Failure> {
    let x0 = at
        .trim()
        .parse::<BigRational>()
        .ok()
        .ok_or_else(|| Failure::usage(format!("--at expects a rational like 3 or -1/2, got '{at}'")))?;
    let (value, used) = evaluate(src, Context::Derive, cfg)?;
    let Value::Poly(f) = value else {
        unreachable!("derive context yields rational functions")
    };
    let d = f
        .derivative_at(&x0)
        .map_err(|e| Failure::domain(format!("{e} (f = {f}, x0 = {x0})")).with_used(used))?;
    let decimal = EudoxusReal::from_ratio(&d).to_decimal_refined(cfg.default_precision, cfg.max_k);
    Ok(outcome(
        format!("{d} = {decimal}\n"),
        json!({ "function": f.to_string(), "at": x0.to_string(), "derivative": d.to_string(), "decimal": decimal }),
        used,
    ))
}

fn parse_set(spec: &str) -> Result<IndexSet, Failure> {
    spec.trim()
        .parse::<IndexSet>()
        .map_err(|e| Failure::usage(format!("bad set spec '{spec}': {e}")))
}

pub fn ultra_query(spec: &str, cfg: &Config) -> Result<Outcome, Failure> {
    let set = parse_set(spec)?;
    let (verdict, repeated) = state::update(&cfg.state_path, |st| {
        let repeated = st.log().iter().any(|(s, _)| *s == set);
        (st.query(&set), repeated)
    })?;
    let mut out = outcome(
        format!("{verdict}\n"),
        json!({ "set": set.to_string(), "verdict": verdict.to_string() }),
        0,
    );
    if repeated {
        out.diagnostics.push(note("already decided; returning the recorded verdict"));
    }
    Ok(out)
}

pub fn ultra_contains(spec: &str, cfg: &Config) -> Result<Outcome, Failure> {
    let set = parse_set(spec)?;
    let membership = state::load(&cfg.state_path)?.contains(&set);
    Ok(outcome(
        format!("{membership}\n"),
        json!({ "set": set.to_string(), "membership": membership.to_string() }),
        0,
    ))
}

pub fn ultra_trace(cfg: &Config) -> Result<Outcome, Failure> {
    let st = state::load(&cfg.state_path)?;
    let decisions: Vec<_> = st
        .log()
        .iter()
        .map(|(s, v)| json!({ "verdict": v.to_string(), "set": s.to_string() }))
        .collect();
    Ok(outcome(
        st.export(),
        json!({ "decisions": decisions, "meet": st.meet().to_string() }),
        0,
    ))
}

pub fn lup_check(src: &str, partition: &str, cfg: &Config) -> Result<Outcome, Failure> {
    let p: Partition = partition.parse().map_err(|e: LupError| Failure::usage(e.to_string()))?;
    let ast = parse_expr(src)?;
    if matches!(ast, Ast::Classify(_)) {
        return Err(Failure::domain("classify(..) has no value to check"));
    }
    let (value, used) = evaluate(src, Context::Hyper, cfg)?;
    let Value::Hyper(g) = value else {
        unreachable!("classify rejected above")
    };
    let element = LupElement::Germ(g);
    let admissible = eq_relation_contains(&element, &p).map_err(|e| match e {
        LupError::UndecidableWithinBudget(_) => Failure::budget(e.to_string()),
        e => Failure::domain(e.to_string()),
    })?;
    let verdict = if admissible { "admissible" } else { "not admissible" };
    Ok(outcome(
        format!("{verdict}\n"),
        json!({
            "element": element.to_string(),
            "classes": p.classes().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "admissible": admissible,
        }),
        used,
    ))
}

pub fn selftest(seed: u64) -> Outcome {
    let reports = selftest::run_all(seed);
    let mut text = String::new();
    for r in &reports {
        text.push_str(&format!(
            "{:<9} {:>4} passed, {} failed\n",
            r.name,
            r.passed,
            r.failures.len()
        ));
        for f in &r.failures {
            text.push_str(&format!("  FAIL {f}\n"));
        }
    }
    let failed = reports.iter().filter(|r| !r.ok()).count();
    if failed == 0 {
        text.push_str(&format!("all {} suites passed\n", reports.len()));
    } else {
        text.push_str(&format!("{failed} of {} suites failed\n", reports.len()));
    }
    let suites: Vec<_> = reports
        .iter()
        .map(|r| json!({ "name": r.name, "passed": r.passed, "failed": r.failures.len(), "failures": r.failures }))
        .collect();
    Outcome {
        text,
        result: json!({ "suites": suites, "ok": failed == 0 }),
        diagnostics: Vec::new(),
        budget_used: 0,
        code: if failed == 0 { 0 } else { 3 },
    }
}
