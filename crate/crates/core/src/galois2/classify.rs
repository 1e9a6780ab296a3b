//! Neutral component data of a triangular rank-two system.
//!
//! The torus is cut out by the lattice `L` of pairs `(m, n)` with
//! `a^m d^n` of trivial class; the unipotent part is absent exactly when the
//! off-diagonal entry can be gauged away.

use std::fmt;

use super::character::{reduce_jointly, Reduction};
use super::lattice::{hnf, integer_kernel, saturate, saturate_in, same_lattice};
use super::multiplicative::multiplicative_relations;
use super::registry::{AssumptionRegistry, Fact, PowerRelation, Support};
use super::solver::{solve_first_order, FirstOrderSolution};
use super::triangular::TriangularForm;
use crate::symcore::OrbitAction;
use crate::{Poly, RatFunc, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisClassification {
    /// Generators of `L` in Hermite form, when decided.
    pub lattice: Option<Vec<Vec<i64>>>,
    /// `L` contains this sublattice whatever the parameter values.
    pub lattice_lower: Vec<Vec<i64>>,
    /// `L` is contained in this lattice (equal divisor and `z` parts).
    pub lattice_upper: Vec<Vec<i64>>,
    pub unipotent_dimension: Option<u8>,
    pub conditional_on: Vec<Fact>,
    /// Genericity used without a registry fact, stated for the reader.
    pub generic_assumptions: Vec<String>,
    pub neutral_component: String,
    pub reps: Vec<Poly>,
    pub character_a: Reduction,
    pub character_d: Reduction,
    pub solver: FirstOrderSolution,
    pub notes: Vec<String>,
}

impl GaloisClassification {
    pub fn is_complete(&self) -> bool {
        self.lattice.is_some() && self.unipotent_dimension.is_some()
    }

    /// Saturation of `L`, or of its known upper bound when undecided.
    pub fn saturation_upper(&self) -> Vec<Vec<i64>> {
        saturate(self.lattice.as_ref().unwrap_or(&self.lattice_upper), 2)
    }
}

fn vec_str(vs: &[Vec<i64>]) -> String {
    if vs.is_empty() {
        return "{0}".into();
    }
    let parts: Vec<String> = vs.iter().map(|v| format!("({}, {})", v[0], v[1])).collect();
    format!("<{}>", parts.join(", "))
}

pub fn lattice_string(vs: &[Vec<i64>]) -> String {
    vec_str(vs)
}

/// Constant part of `a^m d^n` under the joint reduction.
fn lattice_constant(ca: &RatFunc, cd: &RatFunc, v: &[i64]) -> Result<RatFunc> {
    Ok(&ca.pow(v[0])? * &cd.pow(v[1])?)
}

struct LatticeOutcome {
    lattice: Option<Vec<Vec<i64>>>,
    lower: Vec<Vec<i64>>,
    upper: Vec<Vec<i64>>,
    facts: Vec<Fact>,
    notes: Vec<String>,
}

fn relation_lattice(
    ra: &Reduction,
    rd: &Reduction,
    action: &OrbitAction,
    registry: &AssumptionRegistry,
) -> Result<LatticeOutcome> {
    let mut rows: Vec<Vec<i64>> = ra.exponents.iter().zip(&rd.exponents).map(|(x, y)| vec![*x, *y]).collect();
    rows.push(vec![ra.z_exponent, rd.z_exponent]);
    let upper = integer_kernel(&rows, 2);
    let base = match action {
        OrbitAction::Dilation(q) => Some(q.clone()),
        OrbitAction::Translation(_) => None,
    };
    let consts: Vec<RatFunc> =
        upper.iter().map(|v| lattice_constant(&ra.constant, &rd.constant, v)).collect::<Result<_>>()?;
    let mut vals = consts.clone();
    vals.extend(base.clone());
    let rels = multiplicative_relations(&vals)?;
    let lower: Vec<Vec<i64>> = hnf(&rels
        .iter()
        .map(|t| (0..2).map(|j| upper.iter().zip(t).map(|(v, tk)| v[j] * tk).sum()).collect())
        .collect::<Vec<Vec<i64>>>());
    let mut notes = vec![format!("divisor lattice {}, identities give {}", vec_str(&upper), vec_str(&lower))];
    let mut facts = Vec::new();
    if same_lattice(&lower, &upper) {
        return Ok(LatticeOutcome { lattice: Some(lower.clone()), lower, upper, facts, notes });
    }
    let undecided = |notes: Vec<String>, lower: Vec<Vec<i64>>, upper: Vec<Vec<i64>>| LatticeOutcome {
        lattice: None,
        lower,
        upper,
        facts: Vec::new(),
        notes,
    };
    // torsion directions: a power lies in the lower lattice
    let sat = saturate_in(&lower, &upper);
    if !same_lattice(&sat, &lower) {
        if let Some(q) = &base {
            match registry.not_root_of_unity(q) {
                Some(Support::Exact) => {}
                Some(Support::Fact(f)) => facts.push(f),
                None => {
                    notes.push(format!("torsion classes need {q} not a root of unity"));
                    return Ok(undecided(notes, lower, upper));
                }
            }
        }
    }
    // free directions
    match upper.len() - sat.len() {
        0 => {}
        1 => {
            let star = complement(&sat, &upper);
            let e = lattice_constant(&ra.constant, &rd.constant, &star)?;
            match registry.power_relation(&e, base.as_ref())? {
                PowerRelation::Absent(Support::Exact) => {}
                PowerRelation::Absent(Support::Fact(f)) => facts.push(f),
                _ => {
                    notes.push(format!("membership of powers of {e} undecided"));
                    return Ok(undecided(notes, lower, upper));
                }
            }
        }
        _ => {
            let (e1, e2) = (&consts[0], &consts[1]);
            match registry.jointly_independent(e1, e2, base.as_ref())? {
                Some(Support::Exact) => {}
                Some(Support::Fact(f)) => facts.push(f),
                None => {
                    notes.push(format!("independence of {e1} and {e2} undecided"));
                    return Ok(undecided(notes, lower, upper));
                }
            }
        }
    }
    for f in &facts {
        notes.push(format!("consulted {f}"));
    }
    Ok(LatticeOutcome { lattice: Some(lower.clone()), lower, upper, facts, notes })
}

/// A vector completing a rank-one saturated `sat ⊂ upper` to a basis of `upper`.
fn complement(sat: &[Vec<i64>], upper: &[Vec<i64>]) -> Vec<i64> {
    if sat.is_empty() {
        return upper[0].clone();
    }
    let s = &sat[0];
    let (v1, v2) = (&upper[0], &upper[1]);
    // s = x v1 + y v2
    let det = v1[0] * v2[1] - v1[1] * v2[0];
    let x = (s[0] * v2[1] - s[1] * v2[0]) / det;
    let y = (v1[0] * s[1] - v1[1] * s[0]) / det;
    // find (u, w) with x w - y u = 1
    let (g, p, r) = ext_gcd(x, -y);
    debug_assert_eq!(g.abs(), 1);
    let (w, u) = (p * g, r * g);
    (0..2).map(|j| u * v1[j] + w * v2[j]).collect()
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

fn torus_string(sat: &[Vec<i64>]) -> String {
    match sat.len() {
        0 => "diag(C*, C*)".into(),
        2 => "trivial torus".into(),
        _ => {
            let v = &sat[0];
            match (v[0], v[1]) {
                (1, 0) => "{diag(1, t)}".into(),
                (0, 1) => "{diag(t, 1)}".into(),
                (m, n) => format!("{{diag(t1, t2) : t1^{m} t2^{n} = 1}}"),
            }
        }
    }
}

pub fn classify_triangular(
    t: &TriangularForm,
    z: usize,
    action: &OrbitAction,
    registry: &AssumptionRegistry,
    degree_bound: u32,
) -> Result<GaloisClassification> {
    let joint = reduce_jointly(&[t.a.clone(), t.d.clone()], z, action)?;
    let (ra, rd) = (joint.reductions[0].clone(), joint.reductions[1].clone());
    let lat = relation_lattice(&ra, &rd, action, registry)?;
    let solver = solve_first_order(&t.a, &t.b, &t.d, z, action, registry, degree_bound)?;
    let unipotent = if solver.particular.is_some() {
        Some(0)
    } else if solver.none_certified() {
        Some(1)
    } else {
        None
    };
    let mut conditional_on = lat.facts.clone();
    if unipotent.is_some() {
        for f in &solver.facts {
            if !conditional_on.contains(f) {
                conditional_on.push(f.clone());
            }
        }
    }
    let mut generic_assumptions = Vec::new();
    if joint.reps.iter().any(|p| p.present_vars().iter().enumerate().any(|(i, &x)| x && i != z)) {
        generic_assumptions.push("root orbits of parameter-dependent factors stay distinct".to_string());
    }
    let sat = saturate(lat.lattice.as_ref().unwrap_or(&lat.upper), 2);
    let torus = torus_string(&sat);
    let neutral_component = match (&lat.lattice, unipotent) {
        (None, _) | (_, None) => format!("undecided (torus at least {torus})"),
        (Some(_), Some(0)) => torus,
        (Some(_), Some(_)) => {
            if sat == vec![vec![1, 0]] {
                "[[1, C], [0, C*]]".into()
            } else if sat.len() == 2 {
                "[[1, C], [0, 1]]".into()
            } else {
                format!("{torus} ⋉ [[1, C], [0, 1]]")
            }
        }
    };
    let mut notes = lat.notes;
    notes.push(format!("characters: a -> c = {}, d -> c = {}", ra.constant, rd.constant));
    Ok(GaloisClassification {
        lattice: lat.lattice,
        lattice_lower: lat.lower,
        lattice_upper: lat.upper,
        unipotent_dimension: unipotent,
        conditional_on,
        generic_assumptions,
        neutral_component,
        reps: joint.reps,
        character_a: ra,
        character_d: rd,
        solver,
        notes,
    })
}

impl fmt::Display for GaloisClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = match &self.lattice {
            Some(l) => vec_str(l),
            None => "undecided".into(),
        };
        let u = match self.unipotent_dimension {
            Some(u) => u.to_string(),
            None => "undecided".into(),
        };
        write!(f, "L = {l}, unipotent dimension {u}, G0 = {}", self.neutral_component)
    }
}
