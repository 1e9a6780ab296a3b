//! The analysis report. Expressions are stored as parser-compatible strings
//! and matrices as row-major arrays of them, so every witness can be
//! re-verified from the file alone.

use serde::{Deserialize, Serialize};

use dvg_core::{Matrix, RatFunc};

use crate::problem::ProblemSpec;

pub type MatrixStrings = Vec<Vec<String>>;

pub fn expr(r: &RatFunc) -> String {
    r.to_string()
}

pub fn matrix(m: &Matrix) -> MatrixStrings {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| expr(m.get(i, j))).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdaptednessReport {
    pub holds: bool,
    pub phi: Option<String>,
    pub inferred: bool,
    /// `f ∘ ι`, component by component.
    pub image: Vec<String>,
    pub mismatched: Vec<usize>,
    pub phi_kind: Option<String>,
    pub period: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemReport {
    pub phi: String,
    pub matrix: MatrixStrings,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticReport {
    pub claimed: bool,
    /// `(Df)ᵀ J Df = J` for the map, when the dimension is even.
    pub map: Option<bool>,
    /// `Aᵀ J A = J` for the variational matrix.
    pub system: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JuniorReport {
    pub valuation: i64,
    pub expr: String,
    /// The junior part is a first integral of the variational system.
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstIntegralReport {
    pub expr: String,
    pub holds: bool,
    pub trivial: bool,
    pub junior: Option<JuniorReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotropicSummary {
    pub ell: usize,
    pub rank: usize,
    pub expected_rank: usize,
    pub first_integrals_ok: bool,
    pub brackets_ok: bool,
    pub integrable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZiglinReport {
    pub budget: u32,
    pub seed: u64,
    /// Polynomials in `F1..Fk`, the supplied first integrals.
    pub combinations: Vec<String>,
    pub functions: Vec<String>,
    pub juniors: Vec<String>,
    pub rank: usize,
    pub tried: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedReport {
    /// `w = N(z)` with `N ∘ φ = ψ ∘ N`; the variable keeps the name `z`.
    pub normalizer: String,
    pub phi: String,
    pub matrix: MatrixStrings,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangularReport {
    pub found: bool,
    pub complete: bool,
    pub method: Option<String>,
    pub orientation: Option<String>,
    /// `(P ∘ φ)^{-1} A P` is the triangular matrix.
    pub gauge: Option<MatrixStrings>,
    pub matrix: Option<MatrixStrings>,
    pub transcript: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterReport {
    pub exponents: Vec<i64>,
    pub z_exponent: i64,
    pub constant: String,
    pub g: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverReport {
    pub particular: Option<String>,
    pub homogeneous: Vec<String>,
    pub denominator: String,
    pub numerator_degree: i64,
    pub fallback_used: bool,
    pub transcript: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub action: String,
    pub lattice: Option<Vec<Vec<i64>>>,
    pub lattice_lower: Vec<Vec<i64>>,
    pub lattice_upper: Vec<Vec<i64>>,
    pub unipotent_dimension: Option<u8>,
    pub neutral_component: String,
    pub conditional_on: Vec<String>,
    pub generic_assumptions: Vec<String>,
    /// Orbit representatives shared by both diagonal characters.
    pub reps: Vec<String>,
    pub character_a: CharacterReport,
    pub character_d: CharacterReport,
    pub solver: SolverReport,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub verdict: String,
    pub criterion: String,
    pub assumptions_used: Vec<String>,
    pub witnesses: Vec<String>,
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool_version: String,
    pub input_hash: String,
    pub problem: ProblemSpec,
    pub adaptedness: AdaptednessReport,
    pub variational: Option<SystemReport>,
    pub symplectic: SymplecticReport,
    pub first_integrals: Vec<FirstIntegralReport>,
    pub isotropic: Option<IsotropicSummary>,
    pub junior_rank: Option<usize>,
    pub ziglin: Option<ZiglinReport>,
    pub normalized: Option<NormalizedReport>,
    pub triangular: Option<TriangularReport>,
    pub classification: Option<ClassificationReport>,
    pub certificate: CertificateReport,
    pub warnings: Vec<String>,
    pub timing: Timing,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<AnalysisReport, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// The report with timing zeroed, for comparisons across runs.
    pub fn without_timing(&self) -> AnalysisReport {
        AnalysisReport { timing: Timing { total_ms: 0 }, ..self.clone() }
    }
}
