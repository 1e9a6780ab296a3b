//! Declared facts about parameter values, and the queries that consume them.
//!
//! Every query answers from exact relations in `ℚ(params)` when those decide
//! the question for all parameter values, and otherwise looks for a declared
//! fact that covers it. The answer says which of the two happened.

use std::fmt;

use super::multiplicative::multiplicative_relations;
use crate::symcore::{parse_expression, Ring};
use crate::{Error, RatFunc, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fact {
    Nonzero(RatFunc),
    NotRootOfUnity(RatFunc),
    /// `e^n ∉ base^ℤ` for every `n ≠ 0`.
    NotInPowerLattice { e: RatFunc, base: RatFunc },
    /// `e1^m e2^n ∈ base^ℤ` only for `m = n = 0`.
    IndependentMultiplicative { e1: RatFunc, e2: RatFunc, base: RatFunc },
}

impl Fact {
    pub fn expressions(&self) -> Vec<&RatFunc> {
        match self {
            Fact::Nonzero(e) | Fact::NotRootOfUnity(e) => vec![e],
            Fact::NotInPowerLattice { e, base } => vec![e, base],
            Fact::IndependentMultiplicative { e1, e2, base } => vec![e1, e2, base],
        }
    }

    /// Parse `name(arg, ...)` with arguments in expression syntax.
    pub fn parse(text: &str, ring: &Ring) -> Result<Fact> {
        let text = text.trim();
        let bad = || Error::Unsupported(format!("malformed assumption `{text}`"));
        let open = text.find('(').ok_or_else(bad)?;
        if !text.ends_with(')') {
            return Err(bad());
        }
        let name = text[..open].trim();
        let args = split_args(&text[open + 1..text.len() - 1]);
        let exprs: Vec<RatFunc> =
            args.iter().map(|a| parse_expression(a, ring)).collect::<std::result::Result<_, _>>()?;
        match (name, exprs.as_slice()) {
            ("nonzero", [e]) => Ok(Fact::Nonzero(e.clone())),
            ("not_root_of_unity", [e]) => Ok(Fact::NotRootOfUnity(e.clone())),
            ("not_in_power_lattice", [e, b]) => Ok(Fact::NotInPowerLattice { e: e.clone(), base: b.clone() }),
            ("independent_multiplicative", [e1, e2, b]) => {
                Ok(Fact::IndependentMultiplicative { e1: e1.clone(), e2: e2.clone(), base: b.clone() })
            }
            _ => Err(bad()),
        }
    }
}

fn split_args(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out.into_iter().map(|a| a.trim().to_string()).collect()
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::Nonzero(e) => write!(f, "nonzero({e})"),
            Fact::NotRootOfUnity(e) => write!(f, "not_root_of_unity({e})"),
            Fact::NotInPowerLattice { e, base } => write!(f, "not_in_power_lattice({e}, {base})"),
            Fact::IndependentMultiplicative { e1, e2, base } => {
                write!(f, "independent_multiplicative({e1}, {e2}, {base})")
            }
        }
    }
}

/// How a negative answer was reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Support {
    /// Holds for every value of the parameters.
    Exact,
    /// Holds under this declared fact.
    Fact(Fact),
}

/// Answer to "is some nonzero power of `e` in `base^ℤ`".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PowerRelation {
    /// `e^n = base^s` identically, with `n > 0` minimal.
    Identity { n: i64, s: i64 },
    /// No nonzero power lies in `base^ℤ`.
    Absent(Support),
    Undecided,
}

/// Answer to "is `c ∈ base^ℤ`".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegerLog {
    Exact(i64),
    None(Vec<Fact>),
    Unknown,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssumptionRegistry {
    facts: Vec<Fact>,
}

impl AssumptionRegistry {
    pub fn new(facts: Vec<Fact>) -> Result<AssumptionRegistry> {
        let reg = AssumptionRegistry { facts };
        reg.check_consistency()?;
        Ok(reg)
    }

    pub fn empty() -> AssumptionRegistry {
        AssumptionRegistry::default()
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    /// Rejects facts contradicted by identities in `ℚ(params)`.
    pub fn check_consistency(&self) -> Result<()> {
        for fact in &self.facts {
            let contradiction = |why: &str| Err(Error::Unsupported(format!("inconsistent assumption {fact}: {why}")));
            if fact.expressions().iter().any(|e| e.is_zero()) {
                return contradiction("an argument is zero");
            }
            match fact {
                Fact::Nonzero(_) => {}
                Fact::NotRootOfUnity(e) => {
                    if !multiplicative_relations(std::slice::from_ref(e))?.is_empty() {
                        return contradiction("it is a root of unity");
                    }
                }
                Fact::NotInPowerLattice { e, base } => {
                    let rel = multiplicative_relations(&[e.clone(), base.clone()])?;
                    if rel.iter().any(|v| v[0] != 0) {
                        return contradiction("a power of it lies in the lattice identically");
                    }
                }
                Fact::IndependentMultiplicative { e1, e2, base } => {
                    let rel = multiplicative_relations(&[e1.clone(), e2.clone(), base.clone()])?;
                    if rel.iter().any(|v| v[0] != 0 || v[1] != 0) {
                        return contradiction("a multiplicative relation holds identically");
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether `base` is certainly not a root of unity.
    pub fn not_root_of_unity(&self, base: &RatFunc) -> Option<Support> {
        if !multiplicative_relations(std::slice::from_ref(base)).ok()?.is_empty() {
            return None;
        }
        if base.constant_value().is_some() {
            return Some(Support::Exact);
        }
        for fact in &self.facts {
            let e = match fact {
                Fact::NotRootOfUnity(e) => e,
                Fact::NotInPowerLattice { e, .. } => e,
                _ => continue,
            };
            if commensurable(base, e, None) {
                return Some(Support::Fact(fact.clone()));
            }
        }
        None
    }

    /// Is `e^n ∈ base^ℤ` for some `n ≠ 0`?  `base = None` means the trivial
    /// group, i.e. whether `e` is a root of unity.
    pub fn power_relation(&self, e: &RatFunc, base: Option<&RatFunc>) -> Result<PowerRelation> {
        let mut vals = vec![e.clone()];
        vals.extend(base.cloned());
        let rel = multiplicative_relations(&vals)?;
        if let Some(v) = rel.iter().filter(|v| v[0] != 0).min_by_key(|v| v[0].abs()) {
            let sign = v[0].signum();
            return Ok(PowerRelation::Identity { n: v[0].abs(), s: -sign * v.get(1).copied().unwrap_or(0) });
        }
        if vals.iter().all(|v| v.constant_value().is_some()) {
            return Ok(PowerRelation::Absent(Support::Exact));
        }
        for fact in &self.facts {
            let covers = match (fact, base) {
                (Fact::NotInPowerLattice { e: fe, base: fb }, Some(b)) => fb == b && commensurable(e, fe, Some(b)),
                (Fact::NotInPowerLattice { e: fe, .. }, None) | (Fact::NotRootOfUnity(fe), None) => {
                    commensurable(e, fe, None)
                }
                _ => false,
            };
            if covers {
                return Ok(PowerRelation::Absent(Support::Fact(fact.clone())));
            }
        }
        Ok(PowerRelation::Undecided)
    }

    /// Decide `c ∈ base^ℤ`, returning the exponent when it is.
    pub fn integer_log(&self, c: &RatFunc, base: &RatFunc) -> Result<IntegerLog> {
        Ok(match self.power_relation(c, Some(base))? {
            PowerRelation::Identity { n: 1, s } => IntegerLog::Exact(s),
            // c^n = base^s with n > 1 minimal: c = base^m would force base to be a root of unity
            PowerRelation::Identity { .. } => match self.not_root_of_unity(base) {
                Some(Support::Exact) => IntegerLog::None(Vec::new()),
                Some(Support::Fact(f)) => IntegerLog::None(vec![f]),
                None => IntegerLog::Unknown,
            },
            PowerRelation::Absent(Support::Exact) => IntegerLog::None(Vec::new()),
            PowerRelation::Absent(Support::Fact(f)) => IntegerLog::None(vec![f]),
            PowerRelation::Undecided => IntegerLog::Unknown,
        })
    }

    /// Is `e1^m e2^n ∈ base^ℤ` only for `m = n = 0`?  Assumes no relation
    /// holds identically.
    pub fn jointly_independent(&self, e1: &RatFunc, e2: &RatFunc, base: Option<&RatFunc>) -> Result<Option<Support>> {
        let mut vals = vec![e1.clone(), e2.clone()];
        vals.extend(base.cloned());
        if multiplicative_relations(&vals)?.iter().any(|v| v[0] != 0 || v[1] != 0) {
            return Ok(None);
        }
        if vals.iter().all(|v| v.constant_value().is_some()) {
            return Ok(Some(Support::Exact));
        }
        for fact in &self.facts {
            let Fact::IndependentMultiplicative { e1: f1, e2: f2, base: fb } = fact else { continue };
            let base_ok = match base {
                Some(b) => fb == b,
                None => true,
            };
            if !base_ok {
                continue;
            }
            let row = |x: &RatFunc| -> Result<Option<(i64, i64, i64)>> {
                let mut v = vec![x.clone(), f1.clone(), f2.clone()];
                v.extend(base.cloned());
                let rel = multiplicative_relations(&v)?;
                Ok(rel.iter().find(|r| r[0] != 0).map(|r| (r[0], r[1], r[2])))
            };
            if let (Some((a1, b11, b12)), Some((a2, b21, b22))) = (row(e1)?, row(e2)?) {
                // x_i^{a_i} = f1^{-b_i1} f2^{-b_i2} base^{..}: need the 2x2 exponent map invertible
                let det = b11 * b22 - b12 * b21;
                if det != 0 && a1 != 0 && a2 != 0 {
                    return Ok(Some(Support::Fact(fact.clone())));
                }
            }
        }
        Ok(None)
    }
}

/// `x^a = y^b · base^s` identically for some `a, b ≠ 0`.
fn commensurable(x: &RatFunc, y: &RatFunc, base: Option<&RatFunc>) -> bool {
    let mut vals = vec![x.clone(), y.clone()];
    vals.extend(base.cloned());
    match multiplicative_relations(&vals) {
        Ok(rel) => {
            // the lattice contains a vector with both leading entries nonzero
            // iff neither coordinate vanishes on all of it, or a sum does
            let any_x = rel.iter().any(|v| v[0] != 0);
            let any_y = rel.iter().any(|v| v[1] != 0);
            any_x && any_y && (rel.iter().any(|v| v[0] != 0 && v[1] != 0) || rel.len() > 1)
        }
        Err(_) => false,
    }
}

impl fmt::Display for AssumptionRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.facts.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Ring {
        Ring::new(&["z", "q", "qb", "t", "u"]).unwrap()
    }

    fn rf(r: &Ring, s: &str) -> RatFunc {
        parse_expression(s, r).unwrap()
    }

    #[test]
    fn parses_and_prints() {
        let r = ring();
        let f = Fact::parse("not_in_power_lattice(qb, q)", &r).unwrap();
        assert_eq!(f.to_string(), "not_in_power_lattice(qb, q)");
        let f = Fact::parse("independent_multiplicative(q*(1+t), qb, q)", &r).unwrap();
        assert!(matches!(f, Fact::IndependentMultiplicative { .. }));
        assert!(Fact::parse("nonsense(q)", &r).is_err());
        assert!(Fact::parse("nonzero(q", &r).is_err());
    }

    #[test]
    fn consistency() {
        let r = ring();
        assert!(AssumptionRegistry::new(vec![Fact::parse("not_in_power_lattice(qb, q)", &r).unwrap()]).is_ok());
        assert!(AssumptionRegistry::new(vec![Fact::parse("not_in_power_lattice(q^2, q)", &r).unwrap()]).is_err());
        assert!(AssumptionRegistry::new(vec![Fact::parse("not_root_of_unity(-1)", &r).unwrap()]).is_err());
        assert!(AssumptionRegistry::new(vec![Fact::parse("nonzero(0)", &r).unwrap()]).is_err());
        assert!(AssumptionRegistry::new(vec![Fact::parse("independent_multiplicative(q, qb, q)", &r).unwrap()])
            .is_err());
    }

    #[test]
    fn integer_logs() {
        let r = ring();
        let q = rf(&r, "q");
        let empty = AssumptionRegistry::empty();
        assert_eq!(empty.integer_log(&rf(&r, "q^3"), &q).unwrap(), IntegerLog::Exact(3));
        assert_eq!(empty.integer_log(&rf(&r, "1/q^2"), &q).unwrap(), IntegerLog::Exact(-2));
        assert_eq!(empty.integer_log(&rf(&r, "1"), &q).unwrap(), IntegerLog::Exact(0));
        assert_eq!(empty.integer_log(&rf(&r, "qb"), &q).unwrap(), IntegerLog::Unknown);
        assert_eq!(empty.integer_log(&rf(&r, "8"), &rf(&r, "2")).unwrap(), IntegerLog::Exact(3));
        assert_eq!(empty.integer_log(&rf(&r, "3"), &rf(&r, "2")).unwrap(), IntegerLog::None(vec![]));
        let fact = Fact::parse("not_in_power_lattice(qb, q)", &r).unwrap();
        let reg = AssumptionRegistry::new(vec![fact.clone()]).unwrap();
        assert_eq!(reg.integer_log(&rf(&r, "qb"), &q).unwrap(), IntegerLog::None(vec![fact.clone()]));
        assert_eq!(reg.integer_log(&rf(&r, "q/qb"), &q).unwrap(), IntegerLog::None(vec![fact.clone()]));
        assert_eq!(reg.integer_log(&rf(&r, "qb^2*q^5"), &q).unwrap(), IntegerLog::None(vec![fact]));
        // -q is never in q^Z once q is not a root of unity
        assert_eq!(empty.integer_log(&rf(&r, "-q"), &q).unwrap(), IntegerLog::Unknown);
        let reg = AssumptionRegistry::new(vec![Fact::parse("not_root_of_unity(q)", &r).unwrap()]).unwrap();
        assert!(matches!(reg.integer_log(&rf(&r, "-q"), &q).unwrap(), IntegerLog::None(v) if v.len() == 1));
    }

    #[test]
    fn joint_independence() {
        let r = ring();
        let q = rf(&r, "q");
        let fact = Fact::parse("independent_multiplicative(t, u, q)", &r).unwrap();
        let reg = AssumptionRegistry::new(vec![fact.clone()]).unwrap();
        let got = reg.jointly_independent(&rf(&r, "t*u"), &rf(&r, "q*u"), Some(&q)).unwrap();
        assert_eq!(got, Some(Support::Fact(fact)));
        assert_eq!(AssumptionRegistry::empty().jointly_independent(&rf(&r, "t"), &rf(&r, "u"), Some(&q)).unwrap(), None);
    }
}
