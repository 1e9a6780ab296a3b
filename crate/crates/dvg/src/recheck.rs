//! Independent re-verification of a serialized report.
//!
//! Only identities are checked: the map, curve and witnesses are parsed back
//! and substituted. No search is rerun.

use dvg_core::dynsys::{functional_rank, is_first_integral, is_symplectic, SymplecticStructure};
use dvg_core::galois2::lattice::{contains, integer_kernel, same_lattice};
use dvg_core::galois2::solver::residual;
use dvg_core::galois2::{criterion_for, AssumptionRegistry, Fact, IntegerLog};
use dvg_core::junior::{junior_independence_rank, verify_difference_first_integral, JetFrame, JuniorPart};
use dvg_core::symcore::{parse_expression, OrbitAction, Ring};
use dvg_core::varcurve::{
    gauge_transform, normalize_system, variational_system, verify_symplectic_system, DifferenceSystem, Moebius,
    DEFAULT_PERIOD_BOUND,
};
use dvg_core::{Matrix, RatFunc};

use crate::problem::Problem;
use crate::report::{AnalysisReport, CharacterReport, ClassificationReport, MatrixStrings};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecheckOutcome {
    pub checks: Vec<Check>,
}

impl RecheckOutcome {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, false, detail);
    }
}

/// The report cannot be read at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorruptReport(pub String);

impl std::fmt::Display for CorruptReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CorruptReport {}

struct Ctx<'a> {
    ring: &'a Ring,
}

impl Ctx<'_> {
    fn parse(&self, s: &str) -> Result<RatFunc, String> {
        parse_expression(s, self.ring).map_err(|e| format!("`{s}`: {e}"))
    }

    fn matrix(&self, m: &MatrixStrings) -> Result<Matrix, String> {
        let rows = m.iter().map(|r| r.iter().map(|s| self.parse(s)).collect()).collect::<Result<Vec<Vec<_>>, _>>()?;
        Matrix::from_rows(rows).map_err(|e| e.to_string())
    }

    fn moebius(&self, s: &str, z: usize) -> Result<Moebius, String> {
        Moebius::from_ratfunc(&self.parse(s)?, z).map_err(|e| e.to_string())
    }
}

pub fn recheck_text(text: &str) -> Result<RecheckOutcome, CorruptReport> {
    let report = AnalysisReport::from_json(text).map_err(|e| CorruptReport(format!("unreadable report: {e}")))?;
    recheck(&report)
}

pub fn recheck(report: &AnalysisReport) -> Result<RecheckOutcome, CorruptReport> {
    let p = report.problem.validate().map_err(|e| CorruptReport(format!("embedded problem: {e}")))?;
    let cx = Ctx { ring: &p.ring };
    let mut out = RecheckOutcome::default();
    let hash = report.problem.input_hash();
    out.push("input hash", hash == report.input_hash, format!("recomputed {hash}"));
    let sys = check_curve(report, &p, &cx, &mut out);
    check_integrals(report, &p, &cx, sys.as_ref(), &mut out);
    let nsys = sys.as_ref().and_then(|s| check_normalized(report, s, &cx, &mut out));
    check_galois(report, &p, &cx, nsys.as_ref(), &mut out);
    check_certificate(report, &mut out);
    Ok(out)
}

fn check_curve(report: &AnalysisReport, p: &Problem, cx: &Ctx, out: &mut RecheckOutcome) -> Option<DifferenceSystem> {
    let a = &report.adaptedness;
    let Some(phi_s) = &a.phi else {
        out.push("adaptedness", !a.holds, "no φ recorded");
        return None;
    };
    let phi = match cx.moebius(phi_s, p.z) {
        Ok(m) => m,
        Err(e) => {
            out.fail("adaptedness", e);
            return None;
        }
    };
    if let Some(given) = &p.phi {
        out.push("φ matches the problem", *given == phi, phi_s.clone());
    }
    let mut mismatched = Vec::new();
    for (i, (c, f)) in p.curve.components().iter().zip(p.map.components()).enumerate() {
        let lhs = p.curve.restrict(&p.map, f);
        let rhs = phi.apply(c);
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => {}
            _ => mismatched.push(i),
        }
    }
    out.push("adaptedness", mismatched.is_empty() == a.holds && mismatched == a.mismatched, format!("f∘ι = ι∘φ: {}", mismatched.is_empty()));
    let period = phi.classify(DEFAULT_PERIOD_BOUND).period;
    out.push("period of φ", period == a.period, format!("{period:?}"));
    let sys = match (&report.variational, a.holds) {
        (Some(v), true) => {
            let recomputed = variational_system(&p.map, &p.curve, &phi);
            match (recomputed, cx.matrix(&v.matrix)) {
                (Ok(s), Ok(m)) => {
                    out.push("variational matrix", *s.matrix() == m && v.phi == *phi_s, "A = Df(ι(z))");
                    Some(s)
                }
                (Err(e), _) => {
                    out.fail("variational matrix", e.to_string());
                    None
                }
                (_, Err(e)) => {
                    out.fail("variational matrix", e);
                    None
                }
            }
        }
        (None, false) => None,
        _ => {
            out.fail("variational matrix", "present exactly when the curve is adapted");
            None
        }
    };
    let dim = p.map.dim();
    if dim.is_multiple_of(2) {
        let s = SymplecticStructure::for_dimension(dim).expect("even dimension");
        out.push("map symplectic flag", is_symplectic(&p.map, &s).ok() == report.symplectic.map, "(Df)ᵀ J Df = J");
        if let Some(sys) = &sys {
            out.push("system symplectic flag", verify_symplectic_system(sys).ok() == report.symplectic.system, "Aᵀ J A = J");
        }
    }
    sys
}

fn check_integrals(report: &AnalysisReport, p: &Problem, cx: &Ctx, sys: Option<&DifferenceSystem>, out: &mut RecheckOutcome) {
    let frame = JetFrame::new(p.map.vars().to_vec(), p.curve.clone(), p.ys.clone(), p.eps).expect("frame dimensions");
    if report.first_integrals.len() != p.first_integrals.len() {
        out.fail("first integrals", "count differs from the problem");
        return;
    }
    let mut juniors = Vec::new();
    for (i, (fi, h)) in report.first_integrals.iter().zip(&p.first_integrals).enumerate() {
        let name = format!("first integral {}", i + 1);
        match is_first_integral(h, &p.map) {
            Ok(c) => out.push(&name, c.holds == fi.holds && c.trivial == fi.trivial, format!("H∘f = H: {}", c.holds)),
            Err(e) => out.fail(&name, e.to_string()),
        }
        let Some(j) = &fi.junior else { continue };
        let name = format!("junior part {}", i + 1);
        let parsed = match cx.parse(&j.expr) {
            Ok(e) => e,
            Err(e) => {
                out.fail(&name, e);
                continue;
            }
        };
        let recomputed = frame.junior_part(h).ok();
        let same = recomputed.as_ref().is_some_and(|r| r.expr == parsed && r.valuation == j.valuation);
        let verified = sys.map(|s| verify_difference_first_integral(&parsed, s, &p.ys).unwrap_or(false)).unwrap_or(false);
        out.push(&name, same && verified == j.verified, format!("ν = {}, invariant under the variational system: {verified}", j.valuation));
        juniors.push(JuniorPart { valuation: j.valuation, expr: parsed });
    }
    if let Some(r) = report.junior_rank {
        out.push("junior rank", junior_independence_rank(&juniors, &frame) == r, format!("{r}"));
    }
    let Some(z) = &report.ziglin else { return };
    if z.error.is_some() {
        out.push("Ziglin combinations", z.combinations.is_empty(), "search reported as exhausted");
        return;
    }
    match check_ziglin(z, p, &frame) {
        Ok(()) => out.push("Ziglin combinations", true, format!("rank {}", z.rank)),
        Err(e) => out.fail("Ziglin combinations", e),
    }
}

fn check_ziglin(z: &crate::report::ZiglinReport, p: &Problem, frame: &JetFrame) -> Result<(), String> {
    let k = p.first_integrals.len();
    let mut names: Vec<String> = p.ring.names().to_vec();
    names.extend((1..=k).map(|i| format!("F{i}")));
    let big = Ring::new(&names).map_err(|e| e.to_string())?;
    let fs: Vec<(String, RatFunc)> = p
        .first_integrals
        .iter()
        .enumerate()
        .map(|(i, h)| (format!("F{}", i + 1), h.embed(&big).expect("subring")))
        .collect();
    let pairs: Vec<(&str, RatFunc)> = fs.iter().map(|(n, h)| (n.as_str(), h.clone())).collect();
    if z.combinations.len() != z.functions.len() || z.functions.len() != z.juniors.len() {
        return Err("lengths differ".into());
    }
    let mut juniors = Vec::new();
    for ((c, g), j) in z.combinations.iter().zip(&z.functions).zip(&z.juniors) {
        let comb: RatFunc = parse_expression(c, &big).map_err(|e| e.to_string())?;
        let value = comb.substitute_named(&pairs).map_err(|e| e.to_string())?;
        let g: RatFunc = parse_expression(g, &p.ring).map_err(|e| e.to_string())?;
        if value != g.embed(&big).expect("subring") {
            return Err(format!("{c} does not evaluate to the recorded function"));
        }
        let jp = frame.junior_part(&g).map_err(|e| e.to_string())?;
        let jr: RatFunc = parse_expression(j, &p.ring).map_err(|e| e.to_string())?;
        if jp.expr != jr {
            return Err(format!("junior part of {g} differs"));
        }
        juniors.push(jp);
    }
    if junior_independence_rank(&juniors, frame) != z.rank {
        return Err("junior rank differs".into());
    }
    if functional_rank(&p.first_integrals, p.map.vars()) < z.rank {
        return Err("more independent junior parts than functions".into());
    }
    Ok(())
}

fn check_normalized(report: &AnalysisReport, sys: &DifferenceSystem, cx: &Ctx, out: &mut RecheckOutcome) -> Option<DifferenceSystem> {
    let n = report.normalized.as_ref()?;
    let Ok((nsys, class)) = normalize_system(sys) else {
        out.fail("normalization", "the recorded system has no normal form");
        return None;
    };
    let m = cx.matrix(&n.matrix);
    let normalizer = class.normalizer.map(|m| m.as_ratfunc().to_string());
    let ok = m.as_ref().is_ok_and(|m| m == nsys.matrix())
        && cx.parse(&n.phi).is_ok_and(|p| p == nsys.phi().as_ratfunc())
        && normalizer.as_deref() == Some(n.normalizer.as_str());
    out.push("normalization", ok, format!("w = {}", n.normalizer));
    Some(nsys)
}

fn check_galois(report: &AnalysisReport, p: &Problem, cx: &Ctx, nsys: Option<&DifferenceSystem>, out: &mut RecheckOutcome) {
    let Some(t) = &report.triangular else {
        if report.classification.is_some() {
            out.fail("triangular form", "classification without a triangular form");
        }
        return;
    };
    let Some(nsys) = nsys else {
        out.fail("triangular form", "no normalized system to compare with");
        return;
    };
    let (Some(g), Some(m)) = (&t.gauge, &t.matrix) else {
        out.push("triangular form", !t.found && report.classification.is_none(), "none recorded");
        return;
    };
    let (gauge, tri) = match (cx.matrix(g), cx.matrix(m)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            out.fail("triangular form", e);
            return;
        }
    };
    let ok = tri.is_upper_triangular() && gauge_transform(nsys, &gauge).is_ok_and(|s| *s.matrix() == tri);
    out.push("triangular form", ok, "(P∘φ)^{-1} A P is upper triangular and equals the recorded matrix");
    if !ok {
        return;
    }
    let Some(c) = &report.classification else { return };
    let Some(action) = nsys.phi().classify(DEFAULT_PERIOD_BOUND).action() else {
        out.fail("classification", "no orbit action");
        return;
    };
    let (a, b, d) = (tri.get(0, 0).clone(), tri.get(0, 1).clone(), tri.get(1, 1).clone());
    if let Err(e) = check_classification(c, p, cx, &action, &a, &b, &d, out) {
        out.fail("classification", e);
    }
}

fn check_character(name: &str, r: &RatFunc, c: &CharacterReport, reps: &[RatFunc], cx: &Ctx, z: usize, action: &OrbitAction) -> Result<bool, String> {
    if c.exponents.len() != reps.len() {
        return Err(format!("{name}: exponent count"));
    }
    let constant = cx.parse(&c.constant)?;
    let g = cx.parse(&c.g)?;
    if constant.involves(z) {
        return Ok(false);
    }
    let mut rhs = &constant * &RatFunc::var(cx.ring, z).pow(c.z_exponent).map_err(|e| e.to_string())?;
    for (rho, &e) in reps.iter().zip(&c.exponents) {
        rhs = &rhs * &rho.pow(e).map_err(|e| e.to_string())?;
    }
    let shifted = action.shift(&g, z, 1).map_err(|e| e.to_string())?;
    rhs = &rhs * &(&shifted / &g);
    Ok(rhs == *r)
}

#[allow(clippy::too_many_arguments)]
fn check_classification(
    c: &ClassificationReport,
    p: &Problem,
    cx: &Ctx,
    action: &OrbitAction,
    a: &RatFunc,
    b: &RatFunc,
    d: &RatFunc,
    out: &mut RecheckOutcome,
) -> Result<(), String> {
    let z = p.z;
    let reps = c.reps.iter().map(|s| cx.parse(s)).collect::<Result<Vec<_>, _>>()?;
    let ok_a = check_character("a", a, &c.character_a, &reps, cx, z, action)?;
    let ok_d = check_character("d", d, &c.character_d, &reps, cx, z, action)?;
    out.push("character reductions", ok_a && ok_d, "r = c z^k Π ρ^e g(φz)/g(z) for both diagonal entries");

    let mut rows: Vec<Vec<i64>> =
        c.character_a.exponents.iter().zip(&c.character_d.exponents).map(|(x, y)| vec![*x, *y]).collect();
    rows.push(vec![c.character_a.z_exponent, c.character_d.z_exponent]);
    let upper_ok = same_lattice(&integer_kernel(&rows, 2), &c.lattice_upper);
    let ca = cx.parse(&c.character_a.constant)?;
    let cd = cx.parse(&c.character_d.constant)?;
    let mut lower_ok = c.lattice_lower.iter().all(|v| contains(&c.lattice_upper, v));
    for v in &c.lattice_lower {
        let e = &ca.pow(v[0]).map_err(|e| e.to_string())? * &cd.pow(v[1]).map_err(|e| e.to_string())?;
        lower_ok &= match action {
            OrbitAction::Translation(_) => e.is_one(),
            OrbitAction::Dilation(q) => {
                matches!(AssumptionRegistry::empty().integer_log(&e, q), Ok(IntegerLog::Exact(_)))
            }
        };
    }
    let between = c.lattice.as_ref().is_none_or(|l| {
        l.iter().all(|v| contains(&c.lattice_upper, v)) && c.lattice_lower.iter().all(|v| contains(l, v))
    });
    out.push("relation lattice", upper_ok && lower_ok && between, "lower ⊆ L ⊆ upper, with the lower generators exact identities");

    let s = &c.solver;
    let mut solver_ok = true;
    if let Some(u) = &s.particular {
        let u = cx.parse(u)?;
        solver_ok &= residual(&u, a, b, d, z, action).is_ok_and(|r| r.is_zero());
    }
    let zero = RatFunc::zero(cx.ring);
    for h in &s.homogeneous {
        let h = cx.parse(h)?;
        solver_ok &= residual(&h, a, &zero, d, z, action).is_ok_and(|r| r.is_zero());
    }
    let unipotent_ok = match c.unipotent_dimension {
        Some(0) => s.particular.is_some(),
        Some(1) => s.particular.is_none() && !s.fallback_used,
        None => s.particular.is_none() && s.fallback_used,
        Some(_) => false,
    };
    out.push("first-order solver", solver_ok && unipotent_ok, "solutions back-substitute; unipotent dimension agrees");

    let facts = p.registry.facts();
    let mut assumed = true;
    for f in &c.conditional_on {
        assumed &= Fact::parse(f, cx.ring).is_ok_and(|f| facts.contains(&f));
    }
    out.push("assumptions", assumed, "every consulted fact is declared in the problem");
    Ok(())
}

fn check_certificate(report: &AnalysisReport, out: &mut RecheckOutcome) {
    let cert = &report.certificate;
    let hypotheses = report.adaptedness.holds && report.variational.is_some() && report.adaptedness.period.is_none();
    let expected = if !hypotheses {
        ("HYPOTHESES_VIOLATED", "none".to_string())
    } else {
        match &report.classification {
            Some(c) => {
                let crit = criterion_for(c.lattice.as_deref(), &c.lattice_upper, c.unipotent_dimension).to_string();
                if crit == "none" || report.isotropic.as_ref().is_some_and(|i| i.integrable) {
                    ("INCONCLUSIVE", "none".to_string())
                } else {
                    ("NON_INTEGRABLE", crit)
                }
            }
            None => ("INCONCLUSIVE", "none".to_string()),
        }
    };
    let ok = cert.verdict == expected.0 && cert.criterion == expected.1;
    out.push("certificate", ok, format!("{} via {}", cert.verdict, cert.criterion));
    if cert.verdict == "NON_INTEGRABLE" {
        let chain = report.triangular.as_ref().is_some_and(|t| t.found) && report.classification.is_some();
        out.push("witness chain", chain, "triangular form and classification present");
    }
}
