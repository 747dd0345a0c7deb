use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::germ::threshold_u64;
use super::Germ;
use crate::eudoxus::EudoxusReal;
use crate::indexset::IndexSet;
use crate::ufsim::{FilterState, Verdict};

/// Spatial window for component equality checks (see
/// [`EudoxusReal::equals_within`]).
pub const COMPONENT_WINDOW: u64 = 64;

/// Longest finite agreement set enumerated exactly for two germs.
const GERM_ENUMERATION_LIMIT: u64 = 1 << 16;

#[derive(Clone, Debug)]
pub enum RescalingRule {
    /// Component `n` realises the germ's slope at `n`; zero at poles.
    Germ(Germ),
    /// Component `n` is `pre[n]` for `n < pre.len()`, then cycles `period`.
    Periodic {
        pre: Vec<EudoxusReal>,
        period: Vec<EudoxusReal>,
    },
    Sum(Box<RescalingRule>, Box<RescalingRule>),
    Product(Box<RescalingRule>, Box<RescalingRule>),
    Neg(Box<RescalingRule>),
}

/// A rescaling given by a rule `n -> EudoxusReal` and a short description.
#[derive(Clone, Debug)]
pub struct GeneralRescaling {
    rule: RescalingRule,
    description: String,
}

impl RescalingRule {
    fn component(&self, n: usize) -> EudoxusReal {
        match self {
            RescalingRule::Germ(g) => g
                .realize_component(n as u64)
                .unwrap_or_else(|_| EudoxusReal::from_int(0)),
            RescalingRule::Periodic { pre, period } => match n.checked_sub(pre.len()) {
                None => pre[n].clone(),
                Some(k) => period[k % period.len()].clone(),
            },
            RescalingRule::Sum(a, b) => a.component(n).add(&b.component(n)),
            RescalingRule::Product(a, b) => a.component(n).mul(&b.component(n)),
            RescalingRule::Neg(a) => a.component(n).neg(),
        }
    }

    /// `(pre, period)` such that component `n` depends only on
    /// `(n - pre) mod period` once `n >= pre`; `None` if not eventually periodic
    /// by construction.
    fn structure(&self) -> Option<(usize, usize)> {
        match self {
            RescalingRule::Germ(g) => g.as_constant().map(|_| (0, 1)),
            RescalingRule::Periodic { pre, period } => Some((pre.len(), period.len())),
            RescalingRule::Sum(a, b) | RescalingRule::Product(a, b) => {
                let (pa, qa) = a.structure()?;
                let (pb, qb) = b.structure()?;
                Some((pa.max(pb), qa.lcm(&qb)))
            }
            RescalingRule::Neg(a) => a.structure(),
        }
    }
}

impl GeneralRescaling {
    pub fn new(rule: RescalingRule, description: impl Into<String>) -> Self {
        if let RescalingRule::Periodic { period, .. } = &rule {
            assert!(!period.is_empty(), "period must be nonempty");
        }
        GeneralRescaling {
            rule,
            description: description.into(),
        }
    }

    pub fn from_germ(g: Germ) -> Self {
        let description = g.to_string();
        GeneralRescaling::new(RescalingRule::Germ(g), description)
    }

    pub fn constant(x: EudoxusReal) -> Self {
        let description = format!("const {x}");
        GeneralRescaling::new(
            RescalingRule::Periodic {
                pre: vec![],
                period: vec![x],
            },
            description,
        )
    }

    /// Component `n` is `period[n mod len]`.
    pub fn periodic(period: Vec<EudoxusReal>, description: impl Into<String>) -> Self {
        GeneralRescaling::new(RescalingRule::Periodic { pre: vec![], period }, description)
    }

    pub fn rule(&self) -> &RescalingRule {
        &self.rule
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn component(&self, n: usize) -> EudoxusReal {
        self.rule.component(n)
    }

    pub fn structure(&self) -> Option<(usize, usize)> {
        self.rule.structure()
    }

    pub fn add(&self, other: &Self) -> Self {
        GeneralRescaling::new(
            RescalingRule::Sum(Box::new(self.rule.clone()), Box::new(other.rule.clone())),
            format!("({} + {})", self.description, other.description),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        GeneralRescaling::new(
            RescalingRule::Product(Box::new(self.rule.clone()), Box::new(other.rule.clone())),
            format!("({} * {})", self.description, other.description),
        )
    }

    pub fn neg(&self) -> Self {
        GeneralRescaling::new(
            RescalingRule::Neg(Box::new(self.rule.clone())),
            format!("-{}", self.description),
        )
    }

    /// Whether both components at `n` are the same Eudoxus real, up to the
    /// certified window check.
    pub fn components_agree(&self, other: &Self, n: usize) -> bool {
        self.component(n)
            .equals_within(&other.component(n), COMPONENT_WINDOW)
    }
}

impl fmt::Display for GeneralRescaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.description)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FilterVerdict {
    /// The agreement set was computed exactly and is in the filter.
    CertifiedEqual,
    /// The agreement set was computed exactly and is not in the filter.
    CertifiedUnequal,
    /// No eventually periodic agreement set was available; `agreeing` of the
    /// first `sampled` components agree.
    Empirical { agreeing: usize, sampled: usize },
}

/// Equality of two rescalings modulo the simulated ultrafilter.
///
/// The agreement set `{n : x_n = y_n}` is computed exactly when both rules are
/// germs, or both are eventually periodic by construction, and is then
/// decided by `state`. Otherwise a caller-supplied `certificate` is used if it
/// matches the agreement pattern on `0..window`; failing that the answer is
/// empirical and `state` is untouched.
pub fn eq_mod_filter(
    x: &GeneralRescaling,
    y: &GeneralRescaling,
    state: &mut FilterState,
    window: usize,
    certificate: Option<&IndexSet>,
) -> FilterVerdict {
    let decide = |state: &mut FilterState, set: &IndexSet| match state.query(set) {
        Verdict::Accepted => FilterVerdict::CertifiedEqual,
        Verdict::Rejected => FilterVerdict::CertifiedUnequal,
    };
    if let (RescalingRule::Germ(gx), RescalingRule::Germ(gy)) = (&x.rule, &y.rule) {
        if let Some(set) = germ_agreement(gx, gy) {
            return decide(state, &set);
        }
    }
    if let (Some((px, qx)), Some((py, qy))) = (x.structure(), y.structure()) {
        let pre = px.max(py);
        let per = qx.lcm(&qy);
        let bits: Vec<bool> = (0..pre + per).map(|n| x.components_agree(y, n)).collect();
        let set = IndexSet::new(bits[..pre].to_vec(), bits[pre..].to_vec());
        return decide(state, &set);
    }
    let sampled: Vec<bool> = (0..window).map(|n| x.components_agree(y, n)).collect();
    if let Some(cert) = certificate {
        if sampled.iter().enumerate().all(|(n, &b)| cert.member(n) == b) {
            return decide(state, cert);
        }
    }
    FilterVerdict::Empirical {
        agreeing: sampled.iter().filter(|&&b| b).count(),
        sampled: sampled.len(),
    }
}

/// Exact agreement set of two germ rescalings (components at poles are zero).
fn germ_agreement(x: &Germ, y: &Germ) -> Option<IndexSet> {
    if x == y {
        return Some(IndexSet::all());
    }
    let diff = x.sub(y);
    let limit = [threshold_u64(x)?, threshold_u64(y)?, threshold_u64(&diff)?]
        .into_iter()
        .max()?
        .checked_add(1)?;
    if limit > GERM_ENUMERATION_LIMIT {
        return None;
    }
    let slope = |g: &Germ, n: u64| g.phi_component(n).unwrap_or_else(|_| BigRational::zero());
    let members: Vec<usize> = (0..=limit)
        .filter(|&n| slope(x, n) == slope(y, n))
        .map(|n| n.to_usize().expect("small index"))
        .collect();
    Some(IndexSet::from_finite(&members))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt_on_evens() -> GeneralRescaling {
        GeneralRescaling::periodic(
            vec![EudoxusReal::from_sqrt_int(2u32), EudoxusReal::from_int(0)],
            "sqrt2 on evens, 0 on odds",
        )
    }

    fn const_sqrt2() -> GeneralRescaling {
        GeneralRescaling::constant(EudoxusReal::from_sqrt_int(2u32))
    }

    #[test]
    fn identical_rules_are_equal() {
        let mut st = FilterState::new();
        let x = GeneralRescaling::from_germ(Germ::dx());
        assert_eq!(eq_mod_filter(&x, &x.clone(), &mut st, 32, None), FilterVerdict::CertifiedEqual);
        let c = const_sqrt2();
        assert_eq!(eq_mod_filter(&c, &c, &mut st, 32, None), FilterVerdict::CertifiedEqual);
    }

    #[test]
    fn agreement_on_evens_after_evens_accepted() {
        let mut st = FilterState::new();
        st.query(&"pre:;per:10".parse().unwrap());
        let v = eq_mod_filter(&sqrt_on_evens(), &const_sqrt2(), &mut st, 32, None);
        assert_eq!(v, FilterVerdict::CertifiedEqual);
    }

    #[test]
    fn agreement_on_evens_fresh_state() {
        let mut st = FilterState::new();
        let v = eq_mod_filter(&sqrt_on_evens(), &const_sqrt2(), &mut st, 32, None);
        assert_eq!(v, FilterVerdict::CertifiedEqual);
        assert_eq!(st.log().len(), 1);
        assert_eq!(st.log()[0].0.to_string(), "pre:;per:10");
        assert_eq!(st.log()[0].1, Verdict::Accepted);
        // the odd-indexed copy now disagrees modulo the filter
        let zero = GeneralRescaling::constant(EudoxusReal::from_int(0));
        assert_eq!(
            eq_mod_filter(&sqrt_on_evens(), &zero, &mut st, 32, None),
            FilterVerdict::CertifiedUnequal
        );
    }

    #[test]
    fn distinct_germs_are_unequal() {
        let mut st = FilterState::new();
        let x = GeneralRescaling::from_germ(Germ::dx());
        let y = GeneralRescaling::from_germ(Germ::dx().mul(&Germ::dx()));
        assert_eq!(eq_mod_filter(&x, &y, &mut st, 32, None), FilterVerdict::CertifiedUnequal);
        // dx and dx^2 agree only at index 1
        assert_eq!(st.log()[0].0, IndexSet::from_finite(&[0, 1]));
    }

    #[test]
    fn unstructured_pairs_are_empirical_or_certified() {
        let mut st = FilterState::new();
        let x = GeneralRescaling::from_germ(Germ::dx()).add(&sqrt_on_evens());
        let y = GeneralRescaling::from_germ(Germ::dx()).add(&const_sqrt2());
        match eq_mod_filter(&x, &y, &mut st, 16, None) {
            FilterVerdict::Empirical { agreeing, sampled } => {
                assert_eq!(sampled, 16);
                assert_eq!(agreeing, 8);
            }
            v => panic!("{v:?}"),
        }
        assert!(st.log().is_empty());
        let evens: IndexSet = "pre:;per:10".parse().unwrap();
        assert_eq!(
            eq_mod_filter(&x, &y, &mut st, 16, Some(&evens)),
            FilterVerdict::CertifiedEqual
        );
        let odds = evens.complement();
        assert!(matches!(
            eq_mod_filter(&x, &y, &mut st, 16, Some(&odds)),
            FilterVerdict::Empirical { .. }
        ));
    }
}
