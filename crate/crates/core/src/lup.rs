//! Limit ultrapower restriction for filters on `N x N` generated by finite
//! partitions of `N` into eventually periodic classes.
//!
//! A partition `P` induces the equivalence relation "same class". An element
//! `F` is admissible for the filter generated by a list of partitions when its
//! equalizer `eq(F) = {(i, j) : F_i = F_j}` contains the relation of their
//! common refinement, i.e. when the component class `F_i` is constant on every
//! class of that refinement.

use std::fmt;

use num_integer::Integer;

use crate::error::ParseError;
use crate::hyper::{GeneralRescaling, Germ, RescalingRule};
use crate::indexset::IndexSet;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LupError {
    #[error("{0}")]
    Parse(ParseError),
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("a filter needs at least one generating partition")]
    NoGenerators,
    #[error("cannot certify per-class equality for {0}")]
    UndecidableWithinBudget(String),
    #[error("element {index} is not admissible")]
    Inadmissible { index: usize },
}

/// Pairwise-disjoint eventually periodic classes covering `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    classes: Vec<IndexSet>,
}

impl Partition {
    pub fn new(classes: Vec<IndexSet>) -> Result<Self, LupError> {
        if classes.is_empty() {
            return Err(LupError::NotAPartition("no classes".into()));
        }
        for (i, a) in classes.iter().enumerate() {
            for (j, b) in classes.iter().enumerate().skip(i + 1) {
                if !a.intersect(b).is_empty() {
                    return Err(LupError::NotAPartition(format!(
                        "classes {i} ({a}) and {j} ({b}) overlap"
                    )));
                }
            }
        }
        let cover = classes
            .iter()
            .fold(IndexSet::empty(), |acc, c| acc.union(c));
        if cover != IndexSet::all() {
            return Err(LupError::NotAPartition(format!(
                "classes miss {}",
                cover.complement()
            )));
        }
        Ok(Partition { classes })
    }

    pub fn trivial() -> Self {
        Partition {
            classes: vec![IndexSet::all()],
        }
    }

    /// `{n : n ≡ r (mod m)}` for `r = 0..m`.
    pub fn residues(m: usize) -> Self {
        Partition::new((0..m).map(|r| IndexSet::residue_class(r, m)).collect())
            .expect("residue classes partition N")
    }

    pub fn classes(&self) -> &[IndexSet] {
        &self.classes
    }

    /// Common refinement: all nonempty pairwise intersections.
    pub fn refine(&self, other: &Partition) -> Partition {
        let classes = self
            .classes
            .iter()
            .flat_map(|a| other.classes.iter().map(move |b| a.intersect(b)))
            .filter(|c| !c.is_empty())
            .collect();
        Partition { classes }
    }

    /// Merges classes `i` and `j`.
    pub fn merge(&self, i: usize, j: usize) -> Partition {
        assert!(i != j && i < self.classes.len() && j < self.classes.len());
        let mut classes: Vec<IndexSet> = self
            .classes
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != j)
            .map(|(_, c)| c.clone())
            .collect();
        classes.push(self.classes[i].union(&self.classes[j]));
        Partition { classes }
    }
}

impl std::str::FromStr for Partition {
    type Err = LupError;

    /// Semicolon-separated set specs, e.g. `pre:;per:10 ; pre:;per:01`.
    fn from_str(s: &str) -> Result<Self, LupError> {
        let bytes = s.as_bytes();
        let skip_ws = |mut p: usize| {
            while p < bytes.len() && bytes[p].is_ascii_whitespace() {
                p += 1;
            }
            p
        };
        let mut classes = Vec::new();
        let mut pos = skip_ws(0);
        loop {
            let (set, end) = IndexSet::parse_prefix(s, pos).map_err(LupError::Parse)?;
            classes.push(set);
            pos = skip_ws(end);
            if pos == bytes.len() {
                break;
            }
            if bytes[pos] != b';' {
                return Err(LupError::Parse(ParseError::new(pos, "';' or end of input")));
            }
            pos = skip_ws(pos + 1);
        }
        Partition::new(classes)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.classes.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(" ; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitFilterSpec {
    generators: Vec<Partition>,
}

impl LimitFilterSpec {
    pub fn new(generators: Vec<Partition>) -> Result<Self, LupError> {
        if generators.is_empty() {
            return Err(LupError::NoGenerators);
        }
        Ok(LimitFilterSpec { generators })
    }

    pub fn generators(&self) -> &[Partition] {
        &self.generators
    }

    pub fn common_refinement(&self) -> Partition {
        self.generators[1..]
            .iter()
            .fold(self.generators[0].clone(), |acc, p| acc.refine(p))
    }
}

#[derive(Clone, Debug)]
pub enum LupElement {
    Germ(Germ),
    Rescaling(GeneralRescaling),
}

impl LupElement {
    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (LupElement::Germ(a), LupElement::Germ(b)) => LupElement::Germ(a.add(b)),
            _ => LupElement::Rescaling(self.as_rescaling().add(&other.as_rescaling())),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (LupElement::Germ(a), LupElement::Germ(b)) => LupElement::Germ(a.mul(b)),
            _ => LupElement::Rescaling(self.as_rescaling().mul(&other.as_rescaling())),
        }
    }

    fn as_rescaling(&self) -> GeneralRescaling {
        match self {
            LupElement::Germ(g) => GeneralRescaling::from_germ(g.clone()),
            LupElement::Rescaling(r) => r.clone(),
        }
    }
}

impl fmt::Display for LupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LupElement::Germ(g) => write!(f, "{g}"),
            LupElement::Rescaling(r) => write!(f, "{r}"),
        }
    }
}

fn germ_constant_on(g: &Germ, class: &IndexSet) -> bool {
    if g.as_constant().is_some() {
        return true;
    }
    // a nonconstant rational function takes each value finitely often
    if class.is_infinite() {
        return false;
    }
    let mut values = class
        .members_below(class.pre().len())
        .map(|n| g.phi_component(n as u64).ok());
    match values.next() {
        None => true,
        Some(first) => values.all(|v| v == first),
    }
}

/// Whether the equalizer of `x` contains the equivalence relation of `p`.
pub fn eq_relation_contains(x: &LupElement, p: &Partition) -> Result<bool, LupError> {
    let r = match x {
        LupElement::Germ(g) => return Ok(p.classes.iter().all(|c| germ_constant_on(g, c))),
        LupElement::Rescaling(r) => r,
    };
    if let RescalingRule::Germ(g) = r.rule() {
        return Ok(p.classes.iter().all(|c| germ_constant_on(g, c)));
    }
    let (pre, per) = r
        .structure()
        .ok_or_else(|| LupError::UndecidableWithinBudget(r.to_string()))?;
    for class in &p.classes {
        // past `start` both membership and components repeat every `span`
        let start = pre.max(class.pre().len());
        let span = per.lcm(&class.period().len());
        let mut members = class.members_below(start + span);
        if let Some(first) = members.next() {
            let reference = r.component(first);
            for n in members {
                if !r.component(n).equals_within(&reference, crate::hyper::COMPONENT_WINDOW) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Admissibility for the filter generated by `g`. Refinement only enlarges
/// the generated filter's members, so it suffices to test the common
/// refinement of all generators.
pub fn is_admissible(x: &LupElement, g: &LimitFilterSpec) -> Result<bool, LupError> {
    eq_relation_contains(x, &g.common_refinement())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub pairs_checked: usize,
    pub violations: Vec<String>,
}

impl ClosureReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that sums and products of all pairs from `xs` stay admissible.
/// Every input must itself be admissible.
pub fn restricted_closure_check(
    xs: &[LupElement],
    g: &LimitFilterSpec,
) -> Result<ClosureReport, LupError> {
    for (index, x) in xs.iter().enumerate() {
        if !is_admissible(x, g)? {
            return Err(LupError::Inadmissible { index });
        }
    }
    let mut report = ClosureReport {
        pairs_checked: 0,
        violations: Vec::new(),
    };
    for (i, a) in xs.iter().enumerate() {
        for b in &xs[i..] {
            report.pairs_checked += 1;
            for (op, c) in [("+", a.add(b)), ("*", a.mul(b))] {
                if !is_admissible(&c, g)? {
                    report.violations.push(format!("{a} {op} {b}"));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eudoxus::EudoxusReal;
    use num_rational::BigRational;

    fn evens_odds() -> Partition {
        "pre:;per:10 ; pre:;per:01".parse().unwrap()
    }

    fn two_valued(a: u32, b: u32) -> LupElement {
        LupElement::Rescaling(GeneralRescaling::periodic(
            vec![EudoxusReal::from_sqrt_int(a), EudoxusReal::from_sqrt_int(b)],
            format!("sqrt{a}|sqrt{b}"),
        ))
    }

    #[test]
    fn partition_validation() {
        assert_eq!(evens_odds(), Partition::residues(2));
        assert!(matches!(
            "pre:;per:10 ; pre:;per:1".parse::<Partition>(),
            Err(LupError::NotAPartition(_))
        ));
        assert!(matches!(
            "pre:;per:100 ; pre:;per:010".parse::<Partition>(),
            Err(LupError::NotAPartition(_))
        ));
        assert!(matches!(
            "pre:;per:10 ;; pre:;per:01".parse::<Partition>(),
            Err(LupError::Parse(_))
        ));
        let p: Partition = "pre:1;per:0;pre:0;per:1".parse().unwrap();
        assert_eq!(p.classes().len(), 2);
    }

    #[test]
    fn equalizer_examples() {
        let seven = LupElement::Germ(Germ::from_real(BigRational::from_integer(7.into())));
        assert!(eq_relation_contains(&seven, &evens_odds()).unwrap());
        assert!(eq_relation_contains(&seven, &Partition::residues(5)).unwrap());
        let dx = LupElement::Germ(Germ::dx());
        assert!(!eq_relation_contains(&dx, &evens_odds()).unwrap());
        assert!(eq_relation_contains(&two_valued(2, 3), &evens_odds()).unwrap());
        assert!(!eq_relation_contains(&two_valued(2, 3), &Partition::trivial()).unwrap());
        assert!(eq_relation_contains(&two_valued(2, 3), &Partition::residues(4)).unwrap());
    }

    #[test]
    fn finite_classes_for_germs() {
        // {0}, {1}, {n >= 2}
        let p: Partition = "pre:1;per:0 ; pre:01;per:0 ; pre:00;per:1".parse().unwrap();
        assert!(!eq_relation_contains(&LupElement::Germ(Germ::omega()), &p).unwrap());
        let g = Germ::from_int(4);
        assert!(eq_relation_contains(&LupElement::Germ(g), &p).unwrap());
    }

    #[test]
    fn admissibility() {
        let g = LimitFilterSpec::new(vec![evens_odds(), Partition::residues(3)]).unwrap();
        assert_eq!(g.common_refinement().classes().len(), 6);
        assert!(is_admissible(&LupElement::Germ(Germ::from_int(2)), &g).unwrap());
        assert!(!is_admissible(&LupElement::Germ(Germ::dx()), &g).unwrap());
        assert!(is_admissible(&two_valued(2, 3), &g).unwrap());
        assert_eq!(LimitFilterSpec::new(vec![]), Err(LupError::NoGenerators));
        let unstructured = LupElement::Rescaling(
            GeneralRescaling::from_germ(Germ::dx()).add(&GeneralRescaling::periodic(
                vec![EudoxusReal::from_int(1)],
                "one",
            )),
        );
        assert!(matches!(
            is_admissible(&unstructured, &g),
            Err(LupError::UndecidableWithinBudget(_))
        ));
    }

    #[test]
    fn closure() {
        let g = LimitFilterSpec::new(vec![evens_odds()]).unwrap();
        let xs = vec![
            two_valued(2, 3),
            two_valued(5, 7),
            LupElement::Germ(Germ::from_int(3)),
        ];
        let report = restricted_closure_check(&xs, &g).unwrap();
        assert!(report.ok());
        assert_eq!(report.pairs_checked, 6);
        let consts = vec![
            LupElement::Germ(Germ::from_int(1)),
            LupElement::Germ(Germ::from_int(-4)),
        ];
        assert!(restricted_closure_check(&consts, &g).unwrap().ok());
        let mixed = vec![two_valued(2, 3), LupElement::Germ(Germ::dx())];
        assert_eq!(
            restricted_closure_check(&mixed, &g),
            Err(LupError::Inadmissible { index: 1 })
        );
    }
}
