//! Declarative problem files.
//!
//! Every expression is a string in the syntax of the core parser. The ring
//! is laid out as: map variables, `z`, `Y1..Ym`, `eps`, parameters.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use dvg_core::dynsys::RationalMap;
use dvg_core::galois2::{AssumptionRegistry, Fact};
use dvg_core::symcore::{parse_expression, Ring};
use dvg_core::varcurve::{AdaptedCurve, Moebius};
use dvg_core::RatFunc;

pub const CURVE_VAR: &str = "z";
pub const EPS_VAR: &str = "eps";
pub const DEFAULT_DEGREE_BOUND: u32 = 8;
pub const DEFAULT_ZIGLIN_BUDGET: u32 = 4;

fn default_degree() -> u32 {
    DEFAULT_DEGREE_BOUND
}

fn default_ziglin() -> u32 {
    DEFAULT_ZIGLIN_BUDGET
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    /// Numerator degree used when no bound can be derived.
    #[serde(default = "default_degree")]
    pub degree: u32,
    /// Total degree of Ziglin recombinations.
    #[serde(default = "default_ziglin")]
    pub ziglin: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { degree: DEFAULT_DEGREE_BOUND, ziglin: DEFAULT_ZIGLIN_BUDGET }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default)]
    pub name: String,
    pub variables: Vec<String>,
    #[serde(default)]
    pub parameters: Vec<String>,
    /// Registry facts such as `not_in_power_lattice(qb, q)`.
    #[serde(default)]
    pub assumptions: Vec<String>,
    pub map: Vec<String>,
    #[serde(default)]
    pub symplectic: bool,
    /// Components of the curve in the variable `z`.
    pub curve: Vec<String>,
    /// The Moebius transformation of the curve; inferred when absent.
    #[serde(default)]
    pub phi: Option<String>,
    #[serde(default)]
    pub first_integrals: Vec<String>,
    #[serde(default)]
    pub ell: Option<usize>,
    #[serde(default)]
    pub bounds: Bounds,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidInput(pub String);

impl std::fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvalidInput {}

fn invalid(msg: impl Into<String>) -> InvalidInput {
    InvalidInput(msg.into())
}

/// A parsed and validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub ring: Ring,
    pub map: RationalMap,
    pub curve: AdaptedCurve,
    pub phi: Option<Moebius>,
    pub registry: AssumptionRegistry,
    pub first_integrals: Vec<RatFunc>,
    pub z: usize,
    pub ys: Vec<usize>,
    pub eps: usize,
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<ProblemSpec, InvalidInput> {
        serde_json::from_str(text).map_err(|e| invalid(format!("malformed problem file: {e}")))
    }

    /// Canonical serialization; the input hash is taken over it.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("problem specs serialize")
    }

    pub fn input_hash(&self) -> String {
        format!("{:x}", Sha256::digest(self.canonical_json().as_bytes()))
    }

    pub fn fiber_names(&self) -> Vec<String> {
        (1..=self.variables.len()).map(|i| format!("Y{i}")).collect()
    }

    pub fn ring_names(&self) -> Vec<String> {
        let mut names = self.variables.clone();
        names.push(CURVE_VAR.into());
        names.extend(self.fiber_names());
        names.push(EPS_VAR.into());
        names.extend(self.parameters.iter().cloned());
        names
    }

    pub fn ring(&self) -> Result<Ring, InvalidInput> {
        Ring::new(&self.ring_names()).map_err(|e| invalid(format!("bad symbol table: {e}")))
    }

    pub fn validate(&self) -> Result<Problem, InvalidInput> {
        let m = self.variables.len();
        if m == 0 {
            return Err(invalid("no variables"));
        }
        if self.map.len() != m {
            return Err(invalid(format!("{} variables but {} map components", m, self.map.len())));
        }
        if self.curve.len() != m {
            return Err(invalid(format!("{} variables but {} curve components", m, self.curve.len())));
        }
        if let Some(ell) = self.ell {
            if !m.is_multiple_of(2) || ell > m / 2 {
                return Err(invalid(format!("ell = {ell} needs an even dimension and ell <= {}", m / 2)));
            }
            if self.first_integrals.len() != m / 2 + ell {
                return Err(invalid(format!("ell = {ell} needs {} first integrals", m / 2 + ell)));
            }
        }
        let ring = self.ring()?;
        let z = ring.index_of(CURVE_VAR).expect("curve variable");
        let eps = ring.index_of(EPS_VAR).expect("jet variable");
        let ys: Vec<usize> = self.fiber_names().iter().map(|y| ring.index_of(y).expect("fiber variable")).collect();
        let vars: Vec<usize> = (0..m).collect();
        let parse = |what: &str, s: &str| -> Result<RatFunc, InvalidInput> {
            parse_expression(s, &ring).map_err(|e| invalid(format!("{what} `{s}`: {e}")))
        };
        let only = |what: &str, r: &RatFunc, allowed: &dyn Fn(usize) -> bool| -> Result<(), InvalidInput> {
            match (0..ring.len()).find(|&i| r.involves(i) && !allowed(i)) {
                Some(i) => Err(invalid(format!("{what} may not involve `{}`", ring.name(i)))),
                None => Ok(()),
            }
        };
        let is_param = |i: usize| i > eps;
        let map_parts = self
            .map
            .iter()
            .map(|s| {
                let r = parse("map component", s)?;
                only("map component", &r, &|i| i < m || is_param(i))?;
                Ok(r)
            })
            .collect::<Result<Vec<_>, InvalidInput>>()?;
        let map = RationalMap::new(&ring, vars, map_parts, self.symplectic).map_err(|e| invalid(format!("map: {e}")))?;
        let curve_parts = self
            .curve
            .iter()
            .map(|s| {
                let r = parse("curve component", s)?;
                only("curve component", &r, &|i| i == z || is_param(i))?;
                Ok(r)
            })
            .collect::<Result<Vec<_>, InvalidInput>>()?;
        let curve = AdaptedCurve::new(z, curve_parts).map_err(|e| invalid(format!("curve: {e}")))?;
        let phi = match &self.phi {
            Some(s) => {
                let r = parse("phi", s)?;
                only("phi", &r, &|i| i == z || is_param(i))?;
                Some(Moebius::from_ratfunc(&r, z).map_err(|e| invalid(format!("phi: {e}")))?)
            }
            None => None,
        };
        let facts = self
            .assumptions
            .iter()
            .map(|s| Fact::parse(s, &ring).map_err(|e| invalid(format!("assumption `{s}`: {e}"))))
            .collect::<Result<Vec<_>, InvalidInput>>()?;
        for f in &facts {
            for e in f.expressions() {
                only("assumption", e, &is_param)?;
            }
        }
        let registry = AssumptionRegistry::new(facts).map_err(|e| invalid(format!("assumptions: {e}")))?;
        let first_integrals = self
            .first_integrals
            .iter()
            .map(|s| {
                let r = parse("first integral", s)?;
                only("first integral", &r, &|i| i < m || is_param(i))?;
                Ok(r)
            })
            .collect::<Result<Vec<_>, InvalidInput>>()?;
        Ok(Problem { ring, map, curve, phi, registry, first_integrals, z, ys, eps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> ProblemSpec {
        ProblemSpec::from_json(
            r#"{"variables": ["x", "y"], "parameters": ["q", "qb"],
                "assumptions": ["not_in_power_lattice(qb, q)"],
                "map": ["q*x/(1 - y/(x-1))", "qb*y*(1 - y/(x-1))"],
                "curve": ["z", "0"], "phi": "q*z"}"#,
        )
        .unwrap()
    }

    #[test]
    fn ring_layout() {
        assert_eq!(spec().ring_names(), ["x", "y", "z", "Y1", "Y2", "eps", "q", "qb"]);
        let p = spec().validate().unwrap();
        assert_eq!((p.z, p.eps), (2, 5));
        assert_eq!(p.ys, vec![3, 4]);
        assert_eq!(p.registry.facts().len(), 1);
        assert_eq!(spec().bounds, Bounds::default());
    }

    #[test]
    fn rejects_bad_input() {
        let mut s = spec();
        s.map.pop();
        assert!(s.validate().is_err());
        let mut s = spec();
        s.curve[1] = "x".into();
        assert!(s.validate().is_err());
        let mut s = spec();
        s.map[0] = "x + w".into();
        assert!(s.validate().is_err());
        let mut s = spec();
        s.parameters.push("z".into());
        assert!(s.validate().is_err());
        let mut s = spec();
        s.assumptions[0] = "not_in_power_lattice(z, q)".into();
        assert!(s.validate().is_err());
        assert!(ProblemSpec::from_json(r#"{"variables": ["x"], "map": ["x"], "curve": ["z"], "extra": 1}"#).is_err());
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(spec().input_hash(), spec().input_hash());
        let mut s = spec();
        s.seed = 1;
        assert_ne!(s.input_hash(), spec().input_hash());
        assert_eq!(spec().input_hash().len(), 64);
    }
}
