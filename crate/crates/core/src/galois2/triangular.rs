//! Reduction of rank-two systems to upper triangular form by a rational gauge.
//!
//! An invariant line `A v = λ v(φz)` is searched for in three ways: the
//! coordinate axes, constant common eigenvectors of the coefficient matrices
//! of `A`, and hypergeometric solutions of the scalar second-order equation
//! satisfied by the first coordinate (Petkovšek's algorithm and its
//! q-analogue, within a degree bound).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::symcore::gcd::{primitive_part_in, squarefree_in};
use crate::symcore::{ratfunc_sqrt, OrbitAction};
use crate::varcurve::{gauge_transform, DifferenceSystem};
use crate::{Error, Matrix, Poly, RatFunc, Rational, Result};

const MAX_DIVISOR_PAIRS: usize = 4096;
const MAX_ROOT_SEARCH: i64 = 1_000_000;

/// `(P∘φ)^{-1} A P = [[a, b], [0, d]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularForm {
    pub gauge: Matrix,
    pub a: RatFunc,
    pub b: RatFunc,
    pub d: RatFunc,
    pub orientation: String,
    pub method: String,
}

impl TriangularForm {
    pub fn matrix(&self) -> Result<Matrix> {
        let zero = RatFunc::zero(self.a.ring());
        Ok(Matrix::from_rows(vec![vec![self.a.clone(), self.b.clone()], vec![zero, self.d.clone()]])?)
    }

    /// Re-derive the triangular matrix from the gauge.
    pub fn verify(&self, s: &DifferenceSystem) -> Result<bool> {
        let t = gauge_transform(s, &self.gauge)?;
        Ok(t.matrix() == &self.matrix()?)
    }
}

#[derive(Debug, Clone)]
pub struct TriangularSearch {
    pub form: Option<TriangularForm>,
    /// Whether "no form" means none exists with the searched degree bound.
    pub complete: bool,
    pub transcript: Vec<String>,
}

fn form_from_gauge(s: &DifferenceSystem, p: Matrix, orientation: &str, method: &str) -> Result<Option<TriangularForm>> {
    let t = gauge_transform(s, &p)?;
    let m = t.matrix();
    if !m.get(1, 0).is_zero() {
        return Ok(None);
    }
    Ok(Some(TriangularForm {
        gauge: p,
        a: m.get(0, 0).clone(),
        b: m.get(0, 1).clone(),
        d: m.get(1, 1).clone(),
        orientation: orientation.into(),
        method: method.into(),
    }))
}

pub fn triangularize(s: &DifferenceSystem, degree_bound: u32) -> Result<TriangularSearch> {
    if s.rank() != 2 {
        return Err(Error::Dimension("triangularization needs a rank-2 system".into()));
    }
    let ring = s.ring().clone();
    let z = s.z();
    let a = s.matrix();
    let one = RatFunc::one(&ring);
    let zero = RatFunc::zero(&ring);
    let mut transcript = Vec::new();
    if a.get(1, 0).is_zero() {
        let p = Matrix::identity(&ring, 2);
        let form = form_from_gauge(s, p, "upper", "already triangular")?;
        return Ok(TriangularSearch { form, complete: true, transcript: vec!["already upper triangular".into()] });
    }
    if a.get(0, 1).is_zero() {
        let p = Matrix::from_rows(vec![vec![zero.clone(), one.clone()], vec![one.clone(), zero.clone()]])?;
        let form = form_from_gauge(s, p, "upper (from lower, basis swapped)", "coordinate swap")?;
        return Ok(TriangularSearch { form, complete: true, transcript: vec!["lower triangular; basis swapped".into()] });
    }
    if let Some(v) = constant_eigenvector(a, z)? {
        transcript.push(format!("constant invariant line ({}, {})", v[0], v[1]));
        if let Some(form) = form_from_gauge(s, line_gauge(&v), "upper", "constant gauge")? {
            return Ok(TriangularSearch { form: Some(form), complete: true, transcript });
        }
    } else {
        transcript.push("no constant common eigenvector".into());
    }
    let action = normalized_action(s);
    let Some(action) = action else {
        transcript.push("φ is not a normalized translation or dilation; rational line search skipped".into());
        return Ok(TriangularSearch { form: None, complete: false, transcript });
    };
    let hyper = hypergeometric_lines(a, z, &action, degree_bound)?;
    transcript.extend(hyper.notes);
    for v in hyper.lines {
        if let Some(form) = form_from_gauge(s, line_gauge(&v), "upper", "rational invariant line")? {
            transcript.push(format!("invariant line ({}, {})", v[0], v[1]));
            return Ok(TriangularSearch { form: Some(form), complete: true, transcript });
        }
    }
    transcript.push(format!("no invariant line with numerator degree at most {degree_bound}"));
    Ok(TriangularSearch { form: None, complete: hyper.complete, transcript })
}

fn normalized_action(s: &DifferenceSystem) -> Option<OrbitAction> {
    let action = s.phi().classify(crate::varcurve::DEFAULT_PERIOD_BOUND).action()?;
    let image = action.iterate_var(s.z(), 1).ok()?;
    (image == s.phi().as_ratfunc()).then_some(action)
}

/// `P = [v | e]` with `e` a coordinate vector completing `v` to a basis.
fn line_gauge(v: &[RatFunc; 2]) -> Matrix {
    let ring = v[0].ring();
    let one = RatFunc::one(ring);
    let zero = RatFunc::zero(ring);
    let rows = if !v[0].is_zero() {
        vec![vec![v[0].clone(), zero], vec![v[1].clone(), one]]
    } else {
        vec![vec![v[0].clone(), one], vec![v[1].clone(), zero]]
    };
    Matrix::from_rows(rows).expect("2x2")
}

fn z_free_denominators(a: &Matrix) -> Poly {
    let mut l = Poly::one(a.get(0, 0).ring());
    for e in a.entries() {
        let g = crate::symcore::gcd(&l, e.den());
        l = &l * &e.den().exact_div(&g).expect("gcd divides");
    }
    l
}

/// Coefficient matrices `M_i` of `D·A = Σ M_i z^i`.
fn coefficient_matrices(a: &Matrix, z: usize) -> Result<Vec<Matrix>> {
    let l = RatFunc::from_poly(z_free_denominators(a));
    let m = a.scale(&l);
    let ring = l.ring().clone();
    let mut deg = 0usize;
    let coeffs: Vec<Vec<RatFunc>> = m
        .entries()
        .iter()
        .map(|e| {
            let den = RatFunc::from_poly(e.den().clone());
            let cs: Vec<RatFunc> = e.num().coefficients_in(z).into_iter().map(|c| &RatFunc::from_poly(c) / &den).collect();
            deg = deg.max(cs.len());
            cs
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..deg {
        let get = |k: usize| coeffs[k].get(i).cloned().unwrap_or_else(|| RatFunc::zero(&ring));
        out.push(Matrix::from_rows(vec![vec![get(0), get(1)], vec![get(2), get(3)]])?);
    }
    Ok(out)
}

fn parallel(m: &Matrix, v: &[RatFunc; 2]) -> Result<bool> {
    let w = m.mul_vec(v)?;
    Ok((&(&w[0] * &v[1]) - &(&w[1] * &v[0])).is_zero())
}

/// A constant vector `v` with `A v ∥ v`, if one exists.
pub fn constant_eigenvector(a: &Matrix, z: usize) -> Result<Option<[RatFunc; 2]>> {
    let ms = coefficient_matrices(a, z)?;
    let ring = a.get(0, 0).ring().clone();
    let Some(m) = ms.iter().find(|m| !(m.get(0, 1).is_zero() && m.get(1, 0).is_zero() && m.get(0, 0) == m.get(1, 1)))
    else {
        return Ok(None);
    };
    let tr = m.get(0, 0) + m.get(1, 1);
    let det = m.det()?;
    let four = RatFunc::constant(&ring, Rational::from_integer(4.into()));
    let disc = &(&tr * &tr) - &(&four * &det);
    let Some(sq) = ratfunc_sqrt(&disc) else { return Ok(None) };
    let two = RatFunc::constant(&ring, Rational::from_integer(2.into()));
    for sign in [1i64, -1] {
        let lam = &(&tr + &sq.scale(&Rational::from_integer(sign.into()))) / &two;
        let shifted = m.sub(&Matrix::identity(&ring, 2).scale(&lam))?;
        for v in shifted.nullspace() {
            let v = normalize_vector([v[0].clone(), v[1].clone()]);
            let mut ok = true;
            for mi in &ms {
                if !parallel(mi, &v)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(Some(v));
            }
        }
    }
    Ok(None)
}

/// Scale so that the first nonzero entry is 1.
fn normalize_vector(v: [RatFunc; 2]) -> [RatFunc; 2] {
    let pivot = if v[0].is_zero() { v[1].clone() } else { v[0].clone() };
    [&v[0] / &pivot, &v[1] / &pivot]
}

struct LineSearch {
    lines: Vec<[RatFunc; 2]>,
    complete: bool,
    notes: Vec<String>,
}

/// Candidate monic divisors (in `z`) of `p`.
fn divisors(p: &Poly, z: usize, complete: &mut bool) -> Vec<Poly> {
    let ring = p.ring();
    let mut blocks: Vec<(Poly, u32)> = Vec::new();
    for (f, m) in squarefree_in(p, z) {
        for piece in split_rational_roots(&f, z, complete) {
            blocks.push((piece, m));
        }
    }
    let mut out = vec![Poly::one(ring)];
    for (f, m) in blocks {
        let mut next = Vec::new();
        for d in &out {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..m {
                acc = &acc * &f;
                next.push(acc.clone());
            }
        }
        out = next;
    }
    out
}

/// Split off linear factors with rational roots from a parameter-free block.
fn split_rational_roots(f: &Poly, z: usize, complete: &mut bool) -> Vec<Poly> {
    let deg = f.degree_in(z).unwrap_or(0);
    if deg <= 1 {
        return vec![f.clone()];
    }
    let pv = f.present_vars();
    if pv.iter().enumerate().any(|(i, &p)| p && i != z) {
        *complete = false;
        return vec![f.clone()];
    }
    let coeffs: Vec<Rational> = f.coefficients_in(z).iter().map(|c| c.constant_term()).collect();
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let lead = ints.last().unwrap().abs();
    let trail = ints.iter().find(|c| !c.is_zero()).unwrap().abs();
    let small = |x: &BigInt| x.to_i64().is_some_and(|v| v <= MAX_ROOT_SEARCH);
    if !small(&lead) || !small(&trail) {
        *complete = false;
        return vec![f.clone()];
    }
    let divs = |n: i64| (1..=n).filter(|d| n % d == 0).collect::<Vec<i64>>();
    let ring = f.ring();
    let zp = Poly::var(ring, z);
    let mut rest = f.clone();
    let mut out = Vec::new();
    for p in divs(trail.to_i64().unwrap()) {
        for q in divs(lead.to_i64().unwrap()) {
            if p.gcd(&q) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let r = Rational::new((sign * p).into(), q.into());
                let lin = &zp - &Poly::constant(ring, r);
                while rest.degree_in(z).unwrap_or(0) > 0 {
                    match rest.exact_div(&lin) {
                        Some(x) => {
                            rest = x;
                            out.push(lin.clone());
                        }
                        None => break,
                    }
                }
            }
        }
    }
    if rest.degree_in(z).unwrap_or(0) > 0 {
        if rest.degree_in(z).unwrap_or(0) > 1 {
            *complete = false;
        }
        out.push(rest.monic());
    }
    out
}

fn lc_in(r: &RatFunc, z: usize) -> (i64, RatFunc) {
    let den = RatFunc::from_poly(r.den().clone());
    let cs = r.num().coefficients_in(z);
    match cs.last() {
        Some(c) => (cs.len() as i64 - 1, &RatFunc::from_poly(c.clone()) / &den),
        None => (-1, RatFunc::zero(r.ring())),
    }
}

/// Nonzero roots of `c2 W² + c1 W + c0`.
fn quadratic_roots(c2: &RatFunc, c1: &RatFunc, c0: &RatFunc) -> Vec<RatFunc> {
    let ring = c0.ring();
    let mut out = Vec::new();
    if !c2.is_zero() {
        let four = RatFunc::constant(ring, Rational::from_integer(4.into()));
        let disc = &(c1 * c1) - &(&four * &(c2 * c0));
        if let Some(s) = ratfunc_sqrt(&disc) {
            let two = RatFunc::constant(ring, Rational::from_integer(2.into()));
            for r in [&(&(-c1) + &s) / &(&two * c2), &(&(-c1) - &s) / &(&two * c2)] {
                if !r.is_zero() && !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    } else if !c1.is_zero() {
        let r = &(-c0) / c1;
        if !r.is_zero() {
            out.push(r);
        }
    }
    out
}

fn hypergeometric_lines(a: &Matrix, z: usize, action: &OrbitAction, bound: u32) -> Result<LineSearch> {
    let ring = a.get(0, 0).ring().clone();
    let sh = |r: &RatFunc, k: i64| action.shift(r, z, k);
    let (a11, a12) = (a.get(0, 0), a.get(0, 1));
    let a22 = a.get(1, 1);
    let det = a.det()?;
    // y(φ²z) − T y(φz) + N y = 0 for the first coordinate
    let t = &sh(a11, 1)? + &(&(&sh(a12, 1)? * a22) / a12);
    let n = &(&sh(a12, 1)? * &det) / a12;
    let one = RatFunc::one(&ring);
    let coeffs = [n, -t, one];
    let mut l = Poly::one(&ring);
    for c in &coeffs {
        let g = crate::symcore::gcd(&l, c.den());
        l = &l * &c.den().exact_div(&g).expect("gcd divides");
    }
    let lr = RatFunc::from_poly(l);
    let [e0, e1, e2] = coeffs.map(|c| (&c * &lr).into_parts().0);
    let mut complete = true;
    let mut notes = Vec::new();
    let a_divs = divisors(&e0, z, &mut complete);
    let b_divs = divisors(&primitive_part_in(&action.shift_poly(&e2, z, -1)?, z), z, &mut complete);
    let pairs = a_divs.len() * b_divs.len();
    notes.push(format!("scalar equation ({e2})*y(φ²z) + ({e1})*y(φz) + ({e0})*y(z) = 0; {pairs} divisor pairs"));
    if pairs > MAX_DIVISOR_PAIRS {
        notes.push(format!("divisor pairs capped at {MAX_DIVISOR_PAIRS}"));
        complete = false;
    }
    if !complete {
        notes.push("some coefficient blocks could not be split into linear factors".into());
    }
    let mut lines = Vec::new();
    let e0r = RatFunc::from_poly(e0.clone());
    let e1r = RatFunc::from_poly(e1.clone());
    let e2r = RatFunc::from_poly(e2.clone());
    for (ai, ad) in a_divs.iter().enumerate() {
        for bd in &b_divs {
            if ai * b_divs.len() > MAX_DIVISOR_PAIRS {
                break;
            }
            let ar = RatFunc::from_poly(ad.clone());
            let br = RatFunc::from_poly(bd.clone());
            let p2 = &(&e2r / &sh(&br, 1)?) * &sh(&ar, 1)?;
            let p1 = e1r.clone();
            let p0 = &(&e0r / &ar) * &br;
            if [&p2, &p1, &p0].iter().any(|p| p.den().involves(z)) {
                continue;
            }
            let ls = [lc_in(&p0, z), lc_in(&p1, z), lc_in(&p2, z)];
            let top = ls.iter().map(|(d, _)| *d).max().unwrap();
            let c: Vec<RatFunc> =
                ls.iter().map(|(d, c)| if *d == top { c.clone() } else { RatFunc::zero(&ring) }).collect();
            let ws = quadratic_roots(&c[2], &c[1], &c[0]);
            for w in ws {
                for deg_c in 0..=bound as i64 {
                    let zz = match action {
                        OrbitAction::Dilation(q) => &w / &q.pow(deg_c)?,
                        OrbitAction::Translation(_) => {
                            if deg_c < bound as i64 {
                                continue;
                            }
                            w.clone()
                        }
                    };
                    if let Some(cpoly) = polynomial_solution(&[&p0, &p1, &p2], &zz, z, action, deg_c)? {
                        let cr = RatFunc::from_poly(cpoly);
                        let ratio = &(&(&zz * &ar) / &br) * &(&sh(&cr, 1)? / &cr);
                        let second = &(&ratio - a11) / a12;
                        let v = [RatFunc::one(&ring), second];
                        if !lines.contains(&v) {
                            lines.push(v);
                        }
                    }
                }
            }
        }
    }
    Ok(LineSearch { lines, complete, notes })
}

/// Nonzero polynomial `C` of degree `≤ n` with `Σ Z^i p_i C(φ^i z) = 0`.
fn polynomial_solution(p: &[&RatFunc; 3], zz: &RatFunc, z: usize, action: &OrbitAction, n: i64) -> Result<Option<Poly>> {
    let ring = zz.ring().clone();
    let mut columns: Vec<Vec<RatFunc>> = Vec::new();
    for j in 0..=n {
        let zj = RatFunc::var(&ring, z).pow(j)?;
        let mut e = RatFunc::zero(&ring);
        let mut zpow = RatFunc::one(&ring);
        for (i, pi) in p.iter().enumerate() {
            e = &e + &(&(&zpow * pi) * &action.shift(&zj, z, i as i64)?);
            zpow = &zpow * zz;
        }
        let den = RatFunc::from_poly(e.den().clone());
        columns.push(e.num().coefficients_in(z).into_iter().map(|c| &RatFunc::from_poly(c) / &den).collect());
    }
    let rows = columns.iter().map(|c| c.len()).max().unwrap_or(0);
    if rows == 0 {
        return Ok(Some(Poly::one(&ring)));
    }
    let zero = RatFunc::zero(&ring);
    let m = Matrix::from_rows(
        (0..rows).map(|r| columns.iter().map(|c| c.get(r).cloned().unwrap_or_else(|| zero.clone())).collect()).collect(),
    )?;
    let Some(v) = m.nullspace().into_iter().next() else { return Ok(None) };
    let mut c = RatFunc::zero(&ring);
    for (j, x) in v.iter().enumerate() {
        c = &c + &(x * &RatFunc::var(&ring, z).pow(j as i64)?);
    }
    // clear parameter denominators
    Ok(Some(c.into_parts().0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{parse_expression, Ring};
    use crate::varcurve::Moebius;

    fn ring() -> Ring {
        Ring::new(&["z", "q", "qb", "bb", "c"]).unwrap()
    }

    fn rf(r: &Ring, s: &str) -> RatFunc {
        parse_expression(s, r).unwrap()
    }

    fn system(r: &Ring, phi: &str, rows: [[&str; 2]; 2]) -> DifferenceSystem {
        let phi = Moebius::from_ratfunc(&rf(r, phi), 0).unwrap();
        let m = Matrix::from_rows(rows.iter().map(|row| row.iter().map(|e| rf(r, e)).collect()).collect()).unwrap();
        DifferenceSystem::new(phi, m, false).unwrap()
    }

    #[test]
    fn already_triangular() {
        let r = ring();
        let s = system(&r, "q*z", [["q", "q*z/(z-1)"], ["0", "qb"]]);
        let t = triangularize(&s, 4).unwrap().form.unwrap();
        assert_eq!(t.gauge, Matrix::identity(&r, 2));
        assert!(t.verify(&s).unwrap());
    }

    #[test]
    fn lower_triangular_is_swapped() {
        let r = ring();
        let s = system(&r, "z+1", [["z", "0"], ["1", "2"]]);
        let t = triangularize(&s, 4).unwrap().form.unwrap();
        assert_eq!(t.a, rf(&r, "2"));
        assert_eq!(t.d, rf(&r, "z"));
        assert!(t.verify(&s).unwrap());
    }

    #[test]
    fn constant_gauge() {
        let r = ring();
        // [[q, 1], [0, z]] conjugated by [[1,0],[1,1]]
        let s = system(&r, "q*z", [["q-1", "1"], ["q-1-z", "1+z"]]);
        let res = triangularize(&s, 4).unwrap();
        let t = res.form.unwrap();
        assert_eq!(t.method, "constant gauge");
        assert!(t.verify(&s).unwrap());
        let mut diag = vec![t.a.to_string(), t.d.to_string()];
        diag.sort();
        assert_eq!(diag, vec!["q".to_string(), "z".to_string()]);
    }

    #[test]
    fn rational_line() {
        let r = ring();
        // P = [[1,0],[z,1]] conjugating [[z, 1],[0, 2]] under z -> z+1
        let p = Matrix::from_rows(vec![vec![rf(&r, "1"), rf(&r, "0")], vec![rf(&r, "z"), rf(&r, "1")]]).unwrap();
        let base = system(&r, "z+1", [["z", "1"], ["0", "2"]]);
        let pinv = p.inverse().unwrap();
        let pphi = base.phi().apply_matrix(&p).unwrap();
        let conj = pphi.mul(base.matrix()).unwrap().mul(&pinv).unwrap();
        let s = DifferenceSystem::new(base.phi().clone(), conj, false).unwrap();
        let res = triangularize(&s, 3).unwrap();
        let t = res.form.expect("line found");
        assert!(t.verify(&s).unwrap());
    }

    #[test]
    fn irreducible_companion() {
        let r = ring();
        let s = system(&r, "z+1", [["0", "1"], ["1", "z"]]);
        let res = triangularize(&s, 4).unwrap();
        assert!(res.form.is_none());
        assert!(res.complete);
        assert!(res.transcript.iter().any(|l| l.contains("at most 4")));
    }
}
