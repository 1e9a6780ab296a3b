//! Non-integrability verdicts drawn from a Galois classification.
//!
//! Two subgroup patterns obstruct integrability: the full diagonal torus,
//! and `[[1, C], [0, C*]]`. Either one is read off the relation lattice `L`
//! and the unipotent dimension.

use std::fmt;

use super::classify::{lattice_string, GaloisClassification};
use super::lattice::saturate;
use super::registry::Fact;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NonIntegrable,
    Inconclusive,
    HypothesesViolated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NonIntegrable => "NON_INTEGRABLE",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::HypothesesViolated => "HYPOTHESES_VIOLATED",
        })
    }
}

impl Verdict {
    pub fn parse(s: &str) -> Option<Verdict> {
        match s {
            "NON_INTEGRABLE" => Some(Verdict::NonIntegrable),
            "INCONCLUSIVE" => Some(Verdict::Inconclusive),
            "HYPOTHESES_VIOLATED" => Some(Verdict::HypothesesViolated),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    TorusFullDiag,
    UnipotentAffine,
    None,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::TorusFullDiag => "torus_full_diag",
            Criterion::UnipotentAffine => "unipotent_affine",
            Criterion::None => "none",
        })
    }
}

impl Criterion {
    pub fn parse(s: &str) -> Option<Criterion> {
        match s {
            "torus_full_diag" => Some(Criterion::TorusFullDiag),
            "unipotent_affine" => Some(Criterion::UnipotentAffine),
            "none" => Some(Criterion::None),
            _ => None,
        }
    }
}

/// What is known about the setting the classification came from.
#[derive(Debug, Clone, Default)]
pub struct HypothesisContext {
    pub periodic_phi: bool,
    pub curve_checks_passed: bool,
    pub notes: Vec<String>,
}

impl HypothesisContext {
    pub fn satisfied(&self) -> bool {
        !self.periodic_phi && self.curve_checks_passed
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub criterion: Criterion,
    pub assumptions_used: Vec<Fact>,
    pub witnesses: Vec<String>,
    pub reasons: Vec<String>,
}

/// The criterion supported by `c`, if any. Undecided lattices are replaced
/// by their upper bound, which only shrinks the torus.
pub fn fired_criterion(c: &GaloisClassification) -> Criterion {
    criterion_for(c.lattice.as_deref(), &c.lattice_upper, c.unipotent_dimension)
}

/// The same rule on raw lattice data.
pub fn criterion_for(lattice: Option<&[Vec<i64>]>, upper: &[Vec<i64>], unipotent: Option<u8>) -> Criterion {
    let bound = lattice.unwrap_or(upper);
    if bound.is_empty() {
        return Criterion::TorusFullDiag;
    }
    if unipotent == Some(1) && saturate(bound, 2).iter().all(|v| v[1] == 0) {
        return Criterion::UnipotentAffine;
    }
    Criterion::None
}

pub fn nonintegrability_certificate(c: Option<&GaloisClassification>, ctx: &HypothesisContext) -> Certificate {
    let mut reasons: Vec<String> = ctx.notes.clone();
    if !ctx.satisfied() {
        if ctx.periodic_phi {
            reasons.push("the orbit map on the curve is periodic; outside theorem hypotheses".into());
        }
        if !ctx.curve_checks_passed {
            reasons.push("curve checks failed; outside theorem hypotheses".into());
        }
        let cert = Certificate {
            verdict: Verdict::HypothesesViolated,
            criterion: Criterion::None,
            assumptions_used: Vec::new(),
            witnesses: Vec::new(),
            reasons,
        };
        assert_eq!(cert.criterion, Criterion::None);
        return cert;
    }
    let Some(c) = c else {
        reasons.push("no triangular form found; groups of this system are not classified here".into());
        return Certificate {
            verdict: Verdict::Inconclusive,
            criterion: Criterion::None,
            assumptions_used: Vec::new(),
            witnesses: Vec::new(),
            reasons,
        };
    };
    let criterion = fired_criterion(c);
    let mut witnesses = vec![
        format!("relation lattice {}", c.lattice.as_deref().map(lattice_string).unwrap_or_else(|| "undecided".into())),
        format!("lattice upper bound {}", lattice_string(&c.lattice_upper)),
        format!("neutral component {}", c.neutral_component),
    ];
    witnesses.extend(c.notes.iter().cloned());
    witnesses.extend(c.solver.transcript.iter().map(|s| format!("solver: {s}")));
    let mut assumptions_used = c.conditional_on.clone();
    match criterion {
        Criterion::TorusFullDiag => {
            reasons.push("diag(C*, C*) lies in the Galois group".into());
        }
        Criterion::UnipotentAffine => {
            reasons.push("[[1, C], [0, C*]] lies in the Galois group".into());
        }
        Criterion::None => {
            reasons.push(format!("neither criterion applies to {c}"));
            assumptions_used.clear();
        }
    }
    for g in &c.generic_assumptions {
        reasons.push(format!("generic: {g}"));
    }
    let verdict = if criterion == Criterion::None { Verdict::Inconclusive } else { Verdict::NonIntegrable };
    Certificate { verdict, criterion, assumptions_used, witnesses, reasons }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois2::classify::classify_triangular;
    use crate::galois2::registry::AssumptionRegistry;
    use crate::galois2::triangular::TriangularForm;
    use crate::symcore::{parse_expression, OrbitAction, Ring};
    use crate::{Matrix, RatFunc};

    fn ok_ctx() -> HypothesisContext {
        HypothesisContext { periodic_phi: false, curve_checks_passed: true, notes: vec![] }
    }

    fn classify(a: &str, b: &str, d: &str, facts: &[&str]) -> GaloisClassification {
        let r = Ring::new(&["z", "q", "qb"]).unwrap();
        let rf = |s: &str| -> RatFunc { parse_expression(s, &r).unwrap() };
        let t = TriangularForm {
            gauge: Matrix::identity(&r, 2),
            a: rf(a),
            b: rf(b),
            d: rf(d),
            orientation: "upper".into(),
            method: "given".into(),
        };
        let reg = AssumptionRegistry::new(facts.iter().map(|f| Fact::parse(f, &r).unwrap()).collect()).unwrap();
        classify_triangular(&t, 0, &OrbitAction::Dilation(rf("q")), &reg, 4).unwrap()
    }

    #[test]
    fn example_one_generic_fires() {
        let c = classify("q", "q*z/(z-1)", "qb", &["not_in_power_lattice(qb, q)"]);
        let cert = nonintegrability_certificate(Some(&c), &ok_ctx());
        assert_eq!(cert.verdict, Verdict::NonIntegrable);
        assert_eq!(cert.criterion, Criterion::UnipotentAffine);
        assert_eq!(cert.assumptions_used.len(), 1);
    }

    #[test]
    fn example_one_resonant_is_inconclusive() {
        let c = classify("q", "q*z/(z-1)", "1/q", &[]);
        let cert = nonintegrability_certificate(Some(&c), &ok_ctx());
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        assert_eq!(cert.criterion, Criterion::None);
    }

    #[test]
    fn trivial_group_is_inconclusive() {
        let c = classify("1", "0", "1", &[]);
        assert_eq!(nonintegrability_certificate(Some(&c), &ok_ctx()).verdict, Verdict::Inconclusive);
    }

    #[test]
    fn full_torus() {
        let c = classify("z", "0", "z-1", &[]);
        let cert = nonintegrability_certificate(Some(&c), &ok_ctx());
        assert_eq!(cert.criterion, Criterion::TorusFullDiag);
    }

    #[test]
    fn violated_hypotheses_never_fire() {
        let c = classify("q", "q*z/(z-1)", "qb", &["not_in_power_lattice(qb, q)"]);
        let ctx = HypothesisContext { periodic_phi: true, curve_checks_passed: true, notes: vec![] };
        let cert = nonintegrability_certificate(Some(&c), &ctx);
        assert_eq!(cert.verdict, Verdict::HypothesesViolated);
        assert_eq!(cert.criterion, Criterion::None);
    }

    #[test]
    fn missing_form_is_inconclusive() {
        let cert = nonintegrability_certificate(None, &ok_ctx());
        assert_eq!(cert.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn names_round_trip() {
        for v in [Verdict::NonIntegrable, Verdict::Inconclusive, Verdict::HypothesesViolated] {
            assert_eq!(Verdict::parse(&v.to_string()), Some(v));
        }
        for c in [Criterion::TorusFullDiag, Criterion::UnipotentAffine, Criterion::None] {
            assert_eq!(Criterion::parse(&c.to_string()), Some(c));
        }
    }
}
