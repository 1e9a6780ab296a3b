//! The analysis chain: adaptedness, variational system, first integrals and
//! junior parts, normalization, triangularization, classification and the
//! certificate.

use std::time::Instant;

use dvg_core::dynsys::{check_isotropic_integrability, is_first_integral, is_symplectic, SymplecticStructure};
use dvg_core::galois2::{
    classify_triangular, nonintegrability_certificate, triangularize, GaloisClassification, HypothesisContext,
    TriangularForm,
};
use dvg_core::galois2::character::Reduction;
use dvg_core::junior::{
    junior_independence_rank, verify_difference_first_integral, ziglin_combination, JetFrame, JuniorPart,
};
use dvg_core::symcore::OrbitAction;
use dvg_core::varcurve::{
    normalize_system, variational_system, verify_adapted, verify_symplectic_system, DifferenceSystem, MoebiusKind,
    DEFAULT_PERIOD_BOUND,
};
use dvg_core::RatFunc;

use crate::problem::{InvalidInput, Problem, ProblemSpec};
use crate::report::*;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub degree_bound: Option<u32>,
    pub ziglin_budget: Option<u32>,
}

impl Overrides {
    pub fn apply(&self, spec: &ProblemSpec) -> ProblemSpec {
        let mut s = spec.clone();
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(b) = self.degree_bound {
            s.bounds.degree = b;
        }
        if let Some(b) = self.ziglin_budget {
            s.bounds.ziglin = b;
        }
        s
    }
}

pub fn action_string(a: &OrbitAction) -> String {
    match a {
        OrbitAction::Translation(h) => format!("translation z -> z + {}", paren(h)),
        OrbitAction::Dilation(q) => format!("dilation z -> {}*z", paren(q)),
    }
}

fn paren(r: &RatFunc) -> String {
    let s = r.to_string();
    if s.contains(' ') || s.contains('/') {
        format!("({s})")
    } else {
        s
    }
}

fn kind_string(k: &MoebiusKind) -> String {
    match k {
        MoebiusKind::Identity => "identity".into(),
        MoebiusKind::Translation(h) => format!("translation by {h}"),
        MoebiusKind::Dilation(q) => format!("dilation by {q}"),
        MoebiusKind::General => "general".into(),
    }
}

fn character(r: &Reduction) -> CharacterReport {
    CharacterReport {
        exponents: r.exponents.clone(),
        z_exponent: r.z_exponent,
        constant: expr(&r.constant),
        g: expr(&r.g),
    }
}

fn classification_report(c: &GaloisClassification, action: &OrbitAction) -> ClassificationReport {
    ClassificationReport {
        action: action_string(action),
        lattice: c.lattice.clone(),
        lattice_lower: c.lattice_lower.clone(),
        lattice_upper: c.lattice_upper.clone(),
        unipotent_dimension: c.unipotent_dimension,
        neutral_component: c.neutral_component.clone(),
        conditional_on: c.conditional_on.iter().map(|f| f.to_string()).collect(),
        generic_assumptions: c.generic_assumptions.clone(),
        reps: c.reps.iter().map(|p| p.to_string()).collect(),
        character_a: character(&c.character_a),
        character_d: character(&c.character_d),
        solver: SolverReport {
            particular: c.solver.particular.as_ref().map(expr),
            homogeneous: c.solver.homogeneous.iter().map(expr).collect(),
            denominator: expr(&c.solver.denominator),
            numerator_degree: c.solver.numerator_degree,
            fallback_used: c.solver.fallback_used,
            transcript: c.solver.transcript.clone(),
        },
        notes: c.notes.clone(),
    }
}

fn triangular_report(form: Option<&TriangularForm>, complete: bool, transcript: Vec<String>) -> TriangularReport {
    TriangularReport {
        found: form.is_some(),
        complete,
        method: form.map(|f| f.method.clone()),
        orientation: form.map(|f| f.orientation.clone()),
        gauge: form.map(|f| matrix(&f.gauge)),
        matrix: form.map(|f| matrix(&f.matrix().expect("2x2"))),
        transcript,
    }
}

/// Whether the supplied first integrals establish integrability outright.
pub fn integrability_verified(report: &AnalysisReport) -> bool {
    report.isotropic.as_ref().is_some_and(|i| i.integrable)
}

struct Galois {
    normalized: Option<NormalizedReport>,
    triangular: Option<TriangularReport>,
    classification: Option<(GaloisClassification, ClassificationReport)>,
}

fn galois_stage(sys: &DifferenceSystem, p: &Problem, spec: &ProblemSpec, periodic: bool, warnings: &mut Vec<String>) -> Galois {
    let mut out = Galois { normalized: None, triangular: None, classification: None };
    let (nsys, class) = match normalize_system(sys) {
        Ok(v) => v,
        Err(e) => {
            warnings.push(format!("normalization skipped: {e}"));
            return out;
        }
    };
    let normalizer = class.normalizer.as_ref().expect("normalized systems have a normalizer");
    out.normalized =
        Some(NormalizedReport { normalizer: expr(&normalizer.as_ratfunc()), phi: expr(&nsys.phi().as_ratfunc()), matrix: matrix(nsys.matrix()) });
    let search = match triangularize(&nsys, spec.bounds.degree) {
        Ok(s) => s,
        Err(e) => {
            warnings.push(format!("triangularization failed: {e}"));
            return out;
        }
    };
    let mut form = search.form;
    if let Some(f) = &form {
        if !f.verify(&nsys).unwrap_or(false) {
            warnings.push("triangular form failed its gauge identity and was discarded".into());
            form = None;
        }
    }
    out.triangular = Some(triangular_report(form.as_ref(), search.complete, search.transcript));
    let Some(form) = form else { return out };
    if periodic {
        warnings.push("classification skipped: the orbit map is periodic".into());
        return out;
    }
    let Some(action) = nsys.phi().classify(DEFAULT_PERIOD_BOUND).action() else {
        warnings.push("classification skipped: no translation or dilation normal form".into());
        return out;
    };
    match classify_triangular(&form, p.z, &action, &p.registry, spec.bounds.degree) {
        Ok(c) => {
            let r = classification_report(&c, &action);
            out.classification = Some((c, r));
        }
        Err(e) => warnings.push(format!("classification failed: {e}")),
    }
    out
}

pub fn analyze(spec: &ProblemSpec) -> Result<AnalysisReport, InvalidInput> {
    let start = Instant::now();
    let p = spec.validate()?;
    let mut warnings = Vec::new();
    let mut ctx = HypothesisContext { periodic_phi: false, curve_checks_passed: true, notes: Vec::new() };

    let adapted = match verify_adapted(&p.map, &p.curve, p.phi.as_ref()) {
        Ok(a) => Some(a),
        Err(e) => {
            warnings.push(format!("curve check failed: {e}"));
            None
        }
    };
    let adaptedness = match &adapted {
        Some(a) => AdaptednessReport {
            holds: a.holds,
            phi: a.phi.as_ref().map(|m| expr(&m.as_ratfunc())),
            inferred: a.inferred,
            image: a.image.iter().map(expr).collect(),
            mismatched: a.mismatched.clone(),
            phi_kind: a.class.as_ref().map(|c| kind_string(&c.kind)),
            period: a.class.as_ref().and_then(|c| c.period),
        },
        None => AdaptednessReport {
            holds: false,
            phi: None,
            inferred: p.phi.is_none(),
            image: Vec::new(),
            mismatched: Vec::new(),
            phi_kind: None,
            period: None,
        },
    };
    if !adaptedness.holds {
        ctx.curve_checks_passed = false;
        warnings.push("the curve is not adapted to the map".into());
    }
    if let Some(period) = adaptedness.period {
        ctx.periodic_phi = true;
        warnings.push(format!("phi is periodic of order {period}; Galois criteria are outside theorem hypotheses"));
    }

    let sys = match (&adapted, adaptedness.holds) {
        (Some(a), true) => match variational_system(&p.map, &p.curve, a.phi.as_ref().expect("adapted")) {
            Ok(s) => Some(s),
            Err(e) => {
                ctx.curve_checks_passed = false;
                warnings.push(format!("variational system failed: {e}"));
                None
            }
        },
        _ => None,
    };
    let variational = sys.as_ref().map(|s| SystemReport { phi: expr(&s.phi().as_ratfunc()), matrix: matrix(s.matrix()) });

    let dim = p.map.dim();
    let structure = (dim % 2 == 0).then(|| SymplecticStructure::for_dimension(dim).expect("even dimension"));
    let symplectic = SymplecticReport {
        claimed: spec.symplectic,
        map: structure.as_ref().and_then(|s| is_symplectic(&p.map, s).ok()),
        system: sys.as_ref().filter(|_| dim % 2 == 0).and_then(|s| verify_symplectic_system(s).ok()),
    };
    if spec.symplectic && symplectic.map != Some(true) {
        warnings.push("the map was declared symplectic but fails the symplectic check".into());
    }

    let frame = JetFrame::new(p.map.vars().to_vec(), p.curve.clone(), p.ys.clone(), p.eps).expect("frame dimensions");
    let mut first_integrals = Vec::new();
    let mut juniors: Vec<JuniorPart> = Vec::new();
    for h in &p.first_integrals {
        let check = is_first_integral(h, &p.map).map_err(|e| InvalidInput(format!("first integral {h}: {e}")))?;
        let mut fi = FirstIntegralReport { expr: expr(h), holds: check.holds, trivial: check.trivial, junior: None, error: None };
        if !check.trivial {
            match frame.junior_part(h) {
                Ok(j) => {
                    let verified = match &sys {
                        Some(s) => verify_difference_first_integral(&j.expr, s, &p.ys).unwrap_or(false),
                        None => false,
                    };
                    fi.junior = Some(JuniorReport { valuation: j.valuation, expr: expr(&j.expr), verified });
                    juniors.push(j);
                }
                Err(e) => fi.error = Some(e.to_string()),
            }
        }
        first_integrals.push(fi);
    }
    let junior_rank = (!juniors.is_empty()).then(|| junior_independence_rank(&juniors, &frame));

    let isotropic = match &structure {
        Some(s) if !p.first_integrals.is_empty() => {
            let n = dim / 2;
            let ell = spec.ell.or_else(|| p.first_integrals.len().checked_sub(n).filter(|&e| e <= n));
            match ell.map(|ell| (ell, check_isotropic_integrability(&p.map, &p.first_integrals, ell, s))) {
                Some((ell, Ok(r))) => Some(IsotropicSummary {
                    ell,
                    rank: r.rank,
                    expected_rank: r.expected_rank,
                    first_integrals_ok: r.first_integrals_ok(),
                    brackets_ok: r.brackets_ok(),
                    integrable: r.verdict(),
                }),
                Some((_, Err(e))) => {
                    warnings.push(format!("integrability check failed: {e}"));
                    None
                }
                None => None,
            }
        }
        _ => None,
    };

    let usable = !p.first_integrals.is_empty() && first_integrals.iter().all(|f| f.holds && !f.trivial);
    let ziglin = usable.then(|| match ziglin_combination(&p.first_integrals, &frame, spec.bounds.ziglin, spec.seed) {
        Ok(z) => ZiglinReport {
            budget: spec.bounds.ziglin,
            seed: spec.seed,
            combinations: z.combinations.iter().map(|c| c.to_string()).collect(),
            functions: z.functions.iter().map(expr).collect(),
            juniors: z.juniors.iter().map(|j| expr(&j.expr)).collect(),
            rank: z.rank,
            tried: z.tried,
            error: None,
        },
        Err(e) => ZiglinReport {
            budget: spec.bounds.ziglin,
            seed: spec.seed,
            combinations: Vec::new(),
            functions: Vec::new(),
            juniors: Vec::new(),
            rank: 0,
            tried: 0,
            error: Some(e.to_string()),
        },
    });
    if let Some(e) = ziglin.as_ref().and_then(|z| z.error.as_ref()) {
        warnings.push(format!("Ziglin search: {e}"));
    }

    let mut galois = Galois { normalized: None, triangular: None, classification: None };
    match &sys {
        Some(s) if s.rank() == 2 => galois = galois_stage(s, &p, spec, ctx.periodic_phi, &mut warnings),
        Some(s) => ctx.notes.push(format!("rank {} systems are not classified here", s.rank())),
        None => {}
    }
    let cert = nonintegrability_certificate(galois.classification.as_ref().map(|(c, _)| c), &ctx);
    let mut certificate = CertificateReport {
        verdict: cert.verdict.to_string(),
        criterion: cert.criterion.to_string(),
        assumptions_used: cert.assumptions_used.iter().map(|f| f.to_string()).collect(),
        witnesses: cert.witnesses,
        reasons: cert.reasons,
    };
    if certificate.verdict == "NON_INTEGRABLE" && isotropic.as_ref().is_some_and(|i| i.integrable) {
        warnings.push("a criterion fired although the supplied first integrals verify integrability".into());
        certificate.verdict = "INCONCLUSIVE".into();
        certificate.criterion = "none".into();
        certificate.reasons.push("contradiction with verified first integrals; verdict withheld".into());
    }

    Ok(AnalysisReport {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        input_hash: spec.input_hash(),
        problem: spec.clone(),
        adaptedness,
        variational,
        symplectic,
        first_integrals,
        isotropic,
        junior_rank,
        ziglin,
        normalized: galois.normalized,
        triangular: galois.triangular,
        classification: galois.classification.map(|(_, r)| r),
        certificate,
        warnings,
        timing: Timing { total_ms: start.elapsed().as_millis() as u64 },
    })
}
