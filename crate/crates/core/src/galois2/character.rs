//! Rank-one classes: `r = c · z^k · Π ρ_i^{e_i} · g(φz)/g(z)`.

use std::fmt;

use num_traits::One;

use super::multiplicative::poly_valuation;
use super::orbits::{orbit_classes, telescoper, OrbitData};
use super::registry::{AssumptionRegistry, Fact, IntegerLog, PowerRelation, Support};
use crate::symcore::OrbitAction;
use crate::{Error, Poly, RatFunc, Result};

/// The reduction of one rational function against a fixed set of orbit
/// representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// Multiplicity per representative.
    pub exponents: Vec<i64>,
    /// Power of `z`; always 0 under a translation.
    pub z_exponent: i64,
    pub constant: RatFunc,
    pub g: RatFunc,
}

/// Several functions reduced against common representatives.
#[derive(Debug, Clone)]
pub struct JointReduction {
    pub reps: Vec<Poly>,
    pub reductions: Vec<Reduction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Triviality {
    /// `r = g(φz)/g(z)` with this `g`.
    Trivial { witness: RatFunc },
    Nontrivial { facts: Vec<Fact> },
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterClass {
    pub divisor: Vec<(Poly, i64)>,
    pub z_exponent: i64,
    pub constant: RatFunc,
    pub g: RatFunc,
    pub triviality: Triviality,
}

impl CharacterClass {
    pub fn is_trivial(&self) -> bool {
        matches!(self.triviality, Triviality::Trivial { .. })
    }
}

impl fmt::Display for CharacterClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let div: Vec<String> = self.divisor.iter().map(|(p, e)| format!("({p})^{e}")).collect();
        write!(f, "c = {}, z^{}, divisor [{}]", self.constant, self.z_exponent, div.join(", "))
    }
}

fn check_action(action: &OrbitAction, z: usize) -> Result<()> {
    // dispersion_set validates the action; run it on a trivial pair
    let one = Poly::one(action.parameter().ring());
    crate::symcore::dispersion_set(&one, &one, z, action)?;
    Ok(())
}

pub fn reduce_jointly(rs: &[RatFunc], z: usize, action: &OrbitAction) -> Result<JointReduction> {
    check_action(action, z)?;
    let mut polys = Vec::new();
    for r in rs {
        if r.is_zero() {
            return Err(Error::ZeroFunction);
        }
        polys.push(r.num().clone());
        polys.push(r.den().clone());
    }
    let data = orbit_classes(&polys, z, action)?;
    let reductions = rs.iter().map(|r| reduce_one(r, &data, z, action)).collect::<Result<Vec<_>>>()?;
    Ok(JointReduction { reps: data.reps, reductions })
}

fn reduce_one(r: &RatFunc, data: &OrbitData, z: usize, action: &OrbitAction) -> Result<Reduction> {
    let ring = r.ring();
    let mut num = r.num().clone();
    let mut den = r.den().clone();
    let mut k = 0i64;
    if action.is_dilation() {
        let zp = Poly::var(ring, z);
        let vn = num.min_degree_in(z).unwrap_or(0);
        let vd = den.min_degree_in(z).unwrap_or(0);
        num = num.exact_div(&zp.pow(vn)).expect("power of z divides");
        den = den.exact_div(&zp.pow(vd)).expect("power of z divides");
        k = vn as i64 - vd as i64;
    }
    let mut exponents = vec![0i64; data.reps.len()];
    let mut constant = RatFunc::one(ring);
    let mut g = RatFunc::one(ring);
    for m in &data.members {
        let e = poly_valuation(&num, &m.block) - poly_valuation(&den, &m.block);
        if e == 0 {
            continue;
        }
        let bp = m.block.pow(e.unsigned_abs() as u32);
        if e > 0 {
            num = num.exact_div(&bp).expect("valuation");
        } else {
            den = den.exact_div(&bp).expect("valuation");
        }
        exponents[m.class] += e;
        constant = &constant * &m.lambda.pow(e)?;
        g = &g * &telescoper(&data.reps[m.class], m.shift, z, action)?.pow(e)?;
    }
    let rest = RatFunc::new(num, den)?;
    if rest.involves(z) {
        return Err(Error::Degenerate("factor outside the orbit blocks".into()));
    }
    constant = &constant * &rest;
    let red = Reduction { exponents, z_exponent: k, constant, g: monic(&g) };
    verify(r, &red, &data.reps, z, action)?;
    Ok(red)
}

fn monic(g: &RatFunc) -> RatFunc {
    let c = g.num().leading_coeff() / g.den().leading_coeff();
    g.scale(&(crate::Rational::one() / c))
}

/// `r = c z^k Π ρ^e g(φz)/g(z)` exactly.
fn verify(r: &RatFunc, red: &Reduction, reps: &[Poly], z: usize, action: &OrbitAction) -> Result<()> {
    let ring = r.ring();
    let mut rhs = &red.constant * &RatFunc::var(ring, z).pow(red.z_exponent)?;
    for (p, &e) in reps.iter().zip(&red.exponents) {
        rhs = &rhs * &RatFunc::from_poly(p.clone()).pow(e)?;
    }
    rhs = &rhs * &(&action.shift(&red.g, z, 1)? / &red.g);
    if &rhs != r {
        return Err(Error::Degenerate("character reduction failed to verify".into()));
    }
    Ok(())
}

/// Decide whether a reduction is trivial; `r` is only used for the witness.
pub fn decide_triviality(red: &Reduction, action: &OrbitAction, z: usize, registry: &AssumptionRegistry) -> Result<Triviality> {
    if red.exponents.iter().any(|&e| e != 0) || red.z_exponent != 0 {
        return Ok(Triviality::Nontrivial { facts: Vec::new() });
    }
    match action {
        OrbitAction::Dilation(q) => Ok(match registry.integer_log(&red.constant, q)? {
            IntegerLog::Exact(m) => {
                let zm = RatFunc::var(q.ring(), z).pow(m)?;
                Triviality::Trivial { witness: &red.g * &zm }
            }
            IntegerLog::None(facts) => Triviality::Nontrivial { facts },
            IntegerLog::Unknown => Triviality::Undecided,
        }),
        OrbitAction::Translation(_) => {
            if red.constant.is_one() {
                return Ok(Triviality::Trivial { witness: red.g.clone() });
            }
            differs_from_one(&red.constant, registry)
        }
    }
}

fn differs_from_one(c: &RatFunc, registry: &AssumptionRegistry) -> Result<Triviality> {
    if c.constant_value().is_some() {
        return Ok(Triviality::Nontrivial { facts: Vec::new() });
    }
    let cm1 = c - &RatFunc::one(c.ring());
    for fact in registry.facts() {
        if let Fact::Nonzero(e) = fact {
            if (e / &cm1).constant_value().is_some() {
                return Ok(Triviality::Nontrivial { facts: vec![fact.clone()] });
            }
        }
    }
    if let PowerRelation::Absent(s) = registry.power_relation(c, None)? {
        let facts = match s {
            Support::Exact => Vec::new(),
            Support::Fact(f) => vec![f],
        };
        return Ok(Triviality::Nontrivial { facts });
    }
    Ok(Triviality::Undecided)
}

pub fn character_class(
    r: &RatFunc,
    z: usize,
    action: &OrbitAction,
    registry: &AssumptionRegistry,
) -> Result<CharacterClass> {
    let joint = reduce_jointly(std::slice::from_ref(r), z, action)?;
    let red = joint.reductions.into_iter().next().expect("one input");
    let triviality = decide_triviality(&red, action, z, registry)?;
    let divisor = joint.reps.into_iter().zip(red.exponents.iter().copied()).filter(|(_, e)| *e != 0).collect();
    Ok(CharacterClass { divisor, z_exponent: red.z_exponent, constant: red.constant, g: red.g, triviality })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{parse_expression, Ring};

    fn setup() -> (Ring, OrbitAction) {
        let r = Ring::new(&["z", "q", "qb", "h"]).unwrap();
        let a = OrbitAction::Dilation(parse_expression("q", &r).unwrap());
        (r, a)
    }

    fn rf(r: &Ring, s: &str) -> RatFunc {
        parse_expression(s, r).unwrap()
    }

    #[test]
    fn constant_q_is_trivial() {
        let (r, act) = setup();
        let c = character_class(&rf(&r, "q"), 0, &act, &AssumptionRegistry::empty()).unwrap();
        assert_eq!(c.triviality, Triviality::Trivial { witness: rf(&r, "z") });
    }

    #[test]
    fn generic_qb_is_nontrivial() {
        let (r, act) = setup();
        let fact = Fact::parse("not_in_power_lattice(qb, q)", &r).unwrap();
        let reg = AssumptionRegistry::new(vec![fact.clone()]).unwrap();
        let c = character_class(&rf(&r, "qb"), 0, &act, &reg).unwrap();
        assert_eq!(c.triviality, Triviality::Nontrivial { facts: vec![fact] });
        let c = character_class(&rf(&r, "qb"), 0, &act, &AssumptionRegistry::empty()).unwrap();
        assert_eq!(c.triviality, Triviality::Undecided);
    }

    #[test]
    fn telescoping_quotient_is_trivial() {
        let (r, act) = setup();
        let c = character_class(&rf(&r, "(q*z-1)/(z-1)"), 0, &act, &AssumptionRegistry::empty()).unwrap();
        assert_eq!(c.triviality, Triviality::Trivial { witness: rf(&r, "z-1") });
    }

    #[test]
    fn divisors_and_z_powers() {
        let (r, act) = setup();
        let c = character_class(&rf(&r, "3*z^2*(z-1)/(q^2*z-1)"), 0, &act, &AssumptionRegistry::empty()).unwrap();
        assert_eq!(c.z_exponent, 2);
        assert!(c.divisor.is_empty());
        assert!(matches!(c.triviality, Triviality::Nontrivial { .. }));
        let c = character_class(&rf(&r, "(z-1)*(z-2)"), 0, &act, &AssumptionRegistry::empty()).unwrap();
        assert_eq!(c.divisor, vec![(rf(&r, "z^2-3*z+2").into_parts().0, 1)]);
    }

    #[test]
    fn translation_classes() {
        let (r, _) = setup();
        let act = OrbitAction::Translation(rf(&r, "1"));
        let c = character_class(&rf(&r, "(z+3)/z"), 0, &act, &AssumptionRegistry::empty()).unwrap();
        assert!(c.is_trivial());
        let c = character_class(&rf(&r, "2*(z+3)/z"), 0, &act, &AssumptionRegistry::empty()).unwrap();
        assert_eq!(c.triviality, Triviality::Nontrivial { facts: vec![] });
        let c = character_class(&rf(&r, "h*(z+3)/z"), 0, &act, &AssumptionRegistry::empty()).unwrap();
        assert_eq!(c.triviality, Triviality::Undecided);
        let reg = AssumptionRegistry::new(vec![Fact::parse("nonzero(h-1)", &r).unwrap()]).unwrap();
        let c = character_class(&rf(&r, "h*(z+3)/z"), 0, &act, &reg).unwrap();
        assert!(matches!(c.triviality, Triviality::Nontrivial { .. }));
    }
}
