//! Plain-text rendering of a report.

use std::fmt::Write;

use crate::report::{AnalysisReport, MatrixStrings};

fn matrix(out: &mut String, m: &MatrixStrings) {
    for row in m {
        let _ = writeln!(out, "    [{}]", row.join(", "));
    }
}

pub fn render(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let name = if r.problem.name.is_empty() { "(unnamed)" } else { &r.problem.name };
    let _ = writeln!(out, "problem {name}  sha256 {}", r.input_hash);
    let _ = writeln!(out, "verdict {} via {}", r.certificate.verdict, r.certificate.criterion);
    let a = &r.adaptedness;
    let _ = writeln!(
        out,
        "curve adapted: {}  phi = {}{}{}",
        a.holds,
        a.phi.as_deref().unwrap_or("?"),
        if a.inferred { " (inferred)" } else { "" },
        a.period.map(|p| format!("  periodic of order {p}")).unwrap_or_default()
    );
    if let Some(v) = &r.variational {
        let _ = writeln!(out, "variational system Y({}) = A Y(z), A =", v.phi);
        matrix(&mut out, &v.matrix);
    }
    for fi in &r.first_integrals {
        let _ = write!(out, "first integral {}: holds {}", fi.expr, fi.holds);
        if let Some(j) = &fi.junior {
            let _ = write!(out, "; junior part {} (valuation {}), invariant {}", j.expr, j.valuation, j.verified);
        }
        out.push('\n');
    }
    if let Some(i) = &r.isotropic {
        let _ = writeln!(out, "integrability data (ell = {}): verified {}", i.ell, i.integrable);
    }
    if let Some(z) = &r.ziglin {
        match &z.error {
            Some(e) => {
                let _ = writeln!(out, "Ziglin search: {e}");
            }
            None => {
                let _ = writeln!(out, "Ziglin combinations [{}], junior rank {}", z.combinations.join("; "), z.rank);
            }
        }
    }
    if let Some(n) = &r.normalized {
        let _ = writeln!(out, "normal form: w = {}, phi = {}", n.normalizer, n.phi);
    }
    if let Some(t) = &r.triangular {
        match (&t.method, &t.matrix) {
            (Some(m), Some(mat)) => {
                let _ = writeln!(out, "triangular form ({m}):");
                matrix(&mut out, mat);
            }
            _ => {
                let _ = writeln!(out, "no triangular form (search complete: {})", t.complete);
            }
        }
    }
    if let Some(c) = &r.classification {
        let lattice = match &c.lattice {
            Some(l) => format!("{l:?}"),
            None => format!("undecided, within {:?}", c.lattice_upper),
        };
        let u = c.unipotent_dimension.map(|u| u.to_string()).unwrap_or_else(|| "undecided".into());
        let _ = writeln!(out, "{}: lattice {lattice}, unipotent dimension {u}", c.action);
        let _ = writeln!(out, "neutral component {}", c.neutral_component);
        if !c.conditional_on.is_empty() {
            let _ = writeln!(out, "conditional on {}", c.conditional_on.join(", "));
        }
    }
    for reason in &r.certificate.reasons {
        let _ = writeln!(out, "  reason: {reason}");
    }
    for w in &r.warnings {
        let _ = writeln!(out, "  warning: {w}");
    }
    out
}
