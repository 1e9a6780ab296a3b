//! Rational solutions of `u(φz)·d(z) = a(z)·u(z) + b(z)`.
//!
//! The denominator of any solution divides a universal denominator built
//! from dispersions of the coefficients (Abramov), times a power of `z` for
//! dilations. Valuation and degree bounds come from the indicial equations
//! at `0` and `∞`; the numerator is then found by linear algebra over
//! `ℚ(params)`.

use super::registry::{AssumptionRegistry, Fact, IntegerLog};
use crate::symcore::gcd::primitive_part_in;
use crate::symcore::{dispersion_set, gcd, OrbitAction};
use crate::{Error, Matrix, Poly, RatFunc, Result};

const MAX_NUMERATOR_DEGREE: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstOrderSolution {
    /// Some solution, when one exists.
    pub particular: Option<RatFunc>,
    /// Basis of the solutions with `b = 0`.
    pub homogeneous: Vec<RatFunc>,
    /// Every solution has the form `N/denominator` with `deg N ≤ numerator_degree`.
    pub denominator: RatFunc,
    pub numerator_degree: i64,
    /// Some bound could not be derived and the user bound was used instead.
    pub fallback_used: bool,
    pub facts: Vec<Fact>,
    pub transcript: Vec<String>,
}

impl FirstOrderSolution {
    /// No solution exists at all, not merely within a user bound.
    pub fn none_certified(&self) -> bool {
        self.particular.is_none() && !self.fallback_used
    }
}

/// Substitutes `u` into `u(φz)·d − a·u − b`.
pub fn residual(u: &RatFunc, a: &RatFunc, b: &RatFunc, d: &RatFunc, z: usize, action: &OrbitAction) -> Result<RatFunc> {
    let us = action.shift(u, z, 1)?;
    Ok(&(&(&us * d) - &(a * u)) - b)
}

fn ord(p: &Poly, z: usize) -> Option<i64> {
    p.min_degree_in(z).map(i64::from)
}

fn deg(p: &Poly, z: usize) -> Option<i64> {
    p.degree_in(z).map(i64::from)
}

/// Coefficient of `z^i` in `p`, as a function of the parameters.
fn coeff(p: &Poly, z: usize, i: i64) -> RatFunc {
    let cs = p.coefficients_in(z);
    match usize::try_from(i).ok().and_then(|i| cs.get(i)) {
        Some(c) => RatFunc::from_poly(c.clone()),
        None => RatFunc::zero(p.ring()),
    }
}

/// Coefficients in `z` of a rational function whose denominator is free of `z`.
fn z_coefficients(r: &RatFunc, z: usize) -> Vec<RatFunc> {
    debug_assert!(!r.den().involves(z));
    let den = RatFunc::from_poly(r.den().clone());
    r.num().coefficients_in(z).into_iter().map(|c| &RatFunc::from_poly(c) / &den).collect()
}

/// `q` as a base for powers.
fn power_base(q: &RatFunc) -> String {
    let s = q.to_string();
    if s.chars().all(|c| c.is_alphanumeric() || c == '_') { s } else { format!("({s})") }
}

struct Bounds {
    fallback: bool,
    facts: Vec<Fact>,
    notes: Vec<String>,
}

impl Bounds {
    fn integer_log(&mut self, c: &RatFunc, q: &RatFunc, registry: &AssumptionRegistry, what: &str, fallback: i64) -> Result<Option<i64>> {
        Ok(match registry.integer_log(c, q)? {
            IntegerLog::Exact(m) => {
                self.notes.push(format!("{what}: {}^k = {c} gives k = {m}", power_base(q)));
                Some(m)
            }
            IntegerLog::None(facts) => {
                self.notes.push(format!("{what}: {c} is not a power of {}", power_base(q)));
                self.facts.extend(facts);
                None
            }
            IntegerLog::Unknown => {
                self.notes.push(format!("{what}: membership of {c} in {}^Z undecided, using bound {fallback}", power_base(q)));
                self.fallback = true;
                Some(fallback)
            }
        })
    }
}

/// Solve `u(φz)·d = a·u + b` over `ℚ(params)(z)`.
pub fn solve_first_order(
    a: &RatFunc,
    b: &RatFunc,
    d: &RatFunc,
    z: usize,
    action: &OrbitAction,
    registry: &AssumptionRegistry,
    degree_bound: u32,
) -> Result<FirstOrderSolution> {
    if a.is_zero() || d.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let ring = a.ring().clone();
    // polynomial form p1·u(φz) + p0·u = qq
    let mut l = RatFunc::one(&ring);
    for x in [a, b, d] {
        let dx = RatFunc::from_poly(x.den().clone());
        l = &(&l * &dx) / &RatFunc::from_poly(gcd(l.num(), x.den()));
    }
    let p1 = (d * &l).into_parts().0;
    let p0 = (&(-a) * &l).into_parts().0;
    let qq = (b * &l).into_parts().0;
    let mut transcript = vec![format!("equation ({p1})*u(φz) + ({p0})*u(z) = {qq}")];

    // universal denominator
    let mut big_a = primitive_part_in(&action.shift_poly(&p1, z, -1)?, z);
    let mut big_b = primitive_part_in(&p0, z);
    let disp = dispersion_set(&big_a, &big_b, z, action)?;
    let mut u_den = Poly::one(&ring);
    for &k in disp.iter().rev() {
        let k = k as i64;
        let g = primitive_part_in(&gcd(&big_a, &action.shift_poly(&big_b, z, k)?), z);
        if g.degree_in(z).unwrap_or(0) == 0 {
            continue;
        }
        big_a = big_a.exact_div(&g).expect("gcd divides");
        let back = primitive_part_in(&action.shift_poly(&g, z, -k)?, z);
        big_b = big_b.exact_div(&back).expect("shifted gcd divides");
        for j in 0..=k {
            u_den = &u_den * &primitive_part_in(&action.shift_poly(&g, z, -j)?, z);
        }
    }
    let mut bounds = Bounds { fallback: false, facts: Vec::new(), notes: Vec::new() };
    transcript.push(format!("dispersion set {disp:?}, universal denominator {u_den}"));

    let fb = degree_bound as i64;
    // power of z in the denominator (dilations)
    let mut w = 0i64;
    if let OrbitAction::Dilation(q) = action {
        let (a1, a0) = (ord(&p1, z).unwrap(), ord(&p0, z).unwrap());
        let mut v_min: Option<i64> = ord(&qq, z).map(|oq| oq - a1.min(a0));
        if a1 == a0 {
            let c = &(-&coeff(&p0, z, a0)) / &coeff(&p1, z, a1);
            if let Some(m) = bounds.integer_log(&c, q, registry, "indicial equation at 0", -fb)? {
                v_min = Some(v_min.map_or(m, |v| v.min(m)));
            }
        }
        w = (-v_min.unwrap_or(0)).max(0);
        transcript.push(format!("valuation at 0 bounded below by {}", v_min.unwrap_or(0)));
    }

    // degree of u at infinity
    let (b1, b0) = (deg(&p1, z).unwrap(), deg(&p0, z).unwrap());
    let dq = deg(&qq, z);
    let (lc1, lc0) = (coeff(&p1, z, b1), coeff(&p0, z, b0));
    let mut delta: Option<i64> = None;
    let bump = |d: &mut Option<i64>, v: i64| *d = Some(d.map_or(v, |x| x.max(v)));
    match action {
        OrbitAction::Dilation(q) => {
            if let Some(dq) = dq {
                bump(&mut delta, dq - b1.max(b0));
            }
            if b1 == b0 {
                let c = &(-&lc0) / &lc1;
                if let Some(m) = bounds.integer_log(&c, q, registry, "indicial equation at infinity", fb)? {
                    bump(&mut delta, m);
                }
            }
        }
        OrbitAction::Translation(h) => {
            let cancels = b1 == b0 && (&lc1 + &lc0).is_zero();
            if !cancels {
                if let Some(dq) = dq {
                    bump(&mut delta, dq - b1.max(b0));
                }
            } else {
                if let Some(dq) = dq {
                    bump(&mut delta, dq - b1 + 1);
                }
                let s = &coeff(&p1, z, b1 - 1) + &coeff(&p0, z, b0 - 1);
                let ind = &(-&s) / &(&lc1 * h);
                match ind.constant_value() {
                    Some(v) if v.is_integer() => {
                        let v = v.to_integer();
                        let v: i64 = i64::try_from(v).unwrap_or(i64::MAX);
                        if v >= 0 {
                            bounds.notes.push(format!("indicial equation at infinity: degree {v}"));
                            bump(&mut delta, v);
                        }
                    }
                    Some(_) => {}
                    None => {
                        bounds.notes.push(format!("indicial root {ind} is not a constant, using bound {fb}"));
                        bounds.fallback = true;
                        bump(&mut delta, fb);
                    }
                }
            }
        }
    }
    let den_deg = deg(&u_den, z).unwrap_or(0) + w;
    let mut n = delta.map_or(-1, |dl| dl + den_deg);
    if n > MAX_NUMERATOR_DEGREE {
        bounds.notes.push(format!("numerator degree {n} capped at {MAX_NUMERATOR_DEGREE}"));
        bounds.fallback = true;
        n = MAX_NUMERATOR_DEGREE;
    }
    transcript.extend(bounds.notes.iter().cloned());
    transcript.push(format!("z-power {w}, numerator degree at most {n}"));

    let denominator = &RatFunc::from_poly(u_den.clone()) * &RatFunc::var(&ring, z).pow(w)?;
    let mut out = FirstOrderSolution {
        particular: None,
        homogeneous: Vec::new(),
        denominator: denominator.clone(),
        numerator_degree: n,
        fallback_used: bounds.fallback,
        facts: dedup(bounds.facts),
        transcript,
    };
    if n < 0 {
        if b.is_zero() {
            out.particular = Some(RatFunc::zero(&ring));
        }
        out.transcript.push(if b.is_zero() { "only u = 0".into() } else { "no solution".into() });
        return Ok(out);
    }

    // linear system for the numerator coefficients
    let den_s = action.shift(&denominator, z, 1)?;
    let p1r = RatFunc::from_poly(p1.clone());
    let p0r = RatFunc::from_poly(p0.clone());
    let mut columns: Vec<Vec<RatFunc>> = Vec::new();
    for i in 0..=n {
        let zi = RatFunc::var(&ring, z).pow(i)?;
        let zi_s = action.shift(&zi, z, 1)?;
        let e = &(&(&p1r * &denominator) * &zi_s) + &(&(&p0r * &den_s) * &zi);
        columns.push(z_coefficients(&e, z));
    }
    let rhs_poly = &(&RatFunc::from_poly(qq.clone()) * &denominator) * &den_s;
    let rhs_c = z_coefficients(&rhs_poly, z);
    let rows = columns.iter().map(|c| c.len()).chain([rhs_c.len()]).max().unwrap_or(0).max(1);
    let zero = RatFunc::zero(&ring);
    let m_rows: Vec<Vec<RatFunc>> =
        (0..rows).map(|r| columns.iter().map(|c| c.get(r).cloned().unwrap_or_else(|| zero.clone())).collect()).collect();
    let rhs: Vec<RatFunc> = (0..rows).map(|r| rhs_c.get(r).cloned().unwrap_or_else(|| zero.clone())).collect();
    let (particular, homogeneous) = substitution_solve(&m_rows, &rhs, &ring)?;
    let build = |cs: &[RatFunc]| -> Result<RatFunc> {
        let mut num = RatFunc::zero(&ring);
        for (i, c) in cs.iter().enumerate() {
            num = &num + &(c * &RatFunc::var(&ring, z).pow(i as i64)?);
        }
        Ok(&num / &denominator)
    };
    for v in homogeneous {
        let h = build(&v)?;
        let zero_b = RatFunc::zero(&ring);
        assert!(residual(&h, a, &zero_b, d, z, action)?.is_zero(), "homogeneous solution fails to verify");
        out.homogeneous.push(h);
    }
    if let Some(sol) = particular {
        let u = build(&sol)?;
        assert!(residual(&u, a, b, d, z, action)?.is_zero(), "solution fails to verify");
        out.transcript.push(format!("solution u = {u}"));
        out.particular = Some(u);
    } else {
        out.transcript.push("linear system inconsistent: no solution within the bounds".into());
    }
    Ok(out)
}

/// `x_j = e[0] + Σ_k e[k+1]·t_k` in the free unknowns `t_k`.
type Affine = Vec<RatFunc>;

fn affine_add_scaled(acc: &mut Affine, e: &Affine, c: &RatFunc) {
    if acc.len() < e.len() {
        let zero = RatFunc::zero(c.ring());
        acc.resize(e.len(), zero);
    }
    for (x, y) in acc.iter_mut().zip(e) {
        if !y.is_zero() {
            *x = &*x + &(y * c);
        }
    }
}

/// Solve `M x = rhs`, returning one solution and a nullspace basis.
///
/// Rows are consumed from the last (highest power of `z`) to the first.
/// Each row either determines one new unknown in terms of free unknowns or
/// becomes a constraint on them. The numerator systems here are triangular
/// in that order, so the residual system in the free unknowns stays tiny.
fn substitution_solve(m: &[Vec<RatFunc>], rhs: &[RatFunc], ring: &crate::symcore::Ring) -> Result<(Option<Vec<RatFunc>>, Vec<Vec<RatFunc>>)> {
    let cols = m.first().map_or(0, |r| r.len());
    let zero = RatFunc::zero(ring);
    let mut value: Vec<Option<Affine>> = vec![None; cols];
    let mut free = 0usize;
    let make_free = |value: &mut Vec<Option<Affine>>, j: usize, free: &mut usize| {
        let mut e = vec![zero.clone(); *free + 2];
        e[*free + 1] = RatFunc::one(ring);
        value[j] = Some(e);
        *free += 1;
    };
    let mut constraints: Vec<Affine> = Vec::new();
    for (row, b) in m.iter().zip(rhs).rev() {
        let open: Vec<usize> = (0..cols).filter(|&j| value[j].is_none() && !row[j].is_zero()).collect();
        for &j in open.iter().skip(1) {
            make_free(&mut value, j, &mut free);
        }
        // known part of the row minus the right-hand side
        let mut acc: Affine = vec![-b.clone()];
        for (j, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if let Some(e) = &value[j] {
                affine_add_scaled(&mut acc, e, c);
            }
        }
        match open.first() {
            Some(&j) => {
                let inv = &(-&RatFunc::one(ring)) / &row[j];
                let mut e = Vec::new();
                affine_add_scaled(&mut e, &acc, &inv);
                value[j] = Some(e);
            }
            None => constraints.push(acc),
        }
    }
    for j in 0..cols {
        if value[j].is_none() {
            make_free(&mut value, j, &mut free);
        }
    }
    let coef = |e: &Affine, k: usize| e.get(k).cloned().unwrap_or_else(|| zero.clone());
    let constraints: Vec<Affine> = constraints.into_iter().filter(|c| c.iter().any(|x| !x.is_zero())).collect();
    let (t_part, t_null): (Option<Vec<RatFunc>>, Vec<Vec<RatFunc>>) = if free == 0 {
        (constraints.is_empty().then(Vec::new), Vec::new())
    } else if constraints.is_empty() {
        let basis = (0..free)
            .map(|k| (0..free).map(|i| if i == k { RatFunc::one(ring) } else { zero.clone() }).collect())
            .collect();
        (Some(vec![zero.clone(); free]), basis)
    } else {
        let lin = Matrix::from_rows(constraints.iter().map(|c| (1..=free).map(|k| coef(c, k)).collect()).collect())?;
        let b: Vec<RatFunc> = constraints.iter().map(|c| -coef(c, 0)).collect();
        (lin.solve(&b), lin.nullspace())
    };
    let eval = |t: &[RatFunc], with_constant: bool| -> Vec<RatFunc> {
        value
            .iter()
            .map(|e| {
                let e = e.as_ref().expect("every unknown is assigned");
                let mut x = if with_constant { coef(e, 0) } else { zero.clone() };
                for (k, tk) in t.iter().enumerate() {
                    let c = coef(e, k + 1);
                    if !c.is_zero() && !tk.is_zero() {
                        x = &x + &(&c * tk);
                    }
                }
                x
            })
            .collect()
    };
    let particular = t_part.map(|t| eval(&t, true));
    let homogeneous = t_null.iter().map(|t| eval(t, false)).collect();
    Ok((particular, homogeneous))
}

fn dedup(facts: Vec<Fact>) -> Vec<Fact> {
    let mut out: Vec<Fact> = Vec::new();
    for f in facts {
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{parse_expression, Ring};

    fn ring() -> Ring {
        Ring::new(&["z", "q", "qb", "t", "u", "a1", "a2"]).unwrap()
    }

    fn rf(r: &Ring, s: &str) -> RatFunc {
        parse_expression(s, r).unwrap()
    }

    #[test]
    fn planted_translation() {
        let r = ring();
        let act = OrbitAction::Translation(rf(&r, "1"));
        let s = solve_first_order(&rf(&r, "1"), &rf(&r, "1"), &rf(&r, "1"), 0, &act, &AssumptionRegistry::empty(), 4)
            .unwrap();
        let u = s.particular.unwrap();
        assert!((&u - &rf(&r, "z")).constant_value().is_some());
        assert_eq!(s.homogeneous.len(), 1);
        assert!(s.homogeneous[0].constant_value().is_some());
    }

    #[test]
    fn homogeneous_constants() {
        let r = ring();
        let act = OrbitAction::Dilation(rf(&r, "q"));
        let a = rf(&r, "(z-1)/(z+2)");
        let s = solve_first_order(&a, &rf(&r, "0"), &a, 0, &act, &AssumptionRegistry::empty(), 4).unwrap();
        assert_eq!(s.homogeneous.len(), 1);
        assert!(s.homogeneous[0].constant_value().is_some());
        assert!(!s.fallback_used);
    }

    #[test]
    fn example_one_has_no_solution() {
        let r = ring();
        let act = OrbitAction::Dilation(rf(&r, "q"));
        let fact = Fact::parse("not_in_power_lattice(qb, q)", &r).unwrap();
        let reg = AssumptionRegistry::new(vec![fact.clone()]).unwrap();
        let s = solve_first_order(&rf(&r, "q"), &rf(&r, "q*z/(z-1)"), &rf(&r, "qb"), 0, &act, &reg, 4).unwrap();
        assert!(s.none_certified());
        assert_eq!(s.facts, vec![fact]);
        // without the fact the search falls back to the user bound
        let s = solve_first_order(&rf(&r, "q"), &rf(&r, "q*z/(z-1)"), &rf(&r, "qb"), 0, &act, &AssumptionRegistry::empty(), 4)
            .unwrap();
        assert!(s.particular.is_none());
        assert!(s.fallback_used);
        // resonant case: still no rational solution
        let s = solve_first_order(&rf(&r, "q"), &rf(&r, "q*z/(z-1)"), &rf(&r, "1/q"), 0, &act, &reg, 4).unwrap();
        assert!(s.none_certified());
    }

    #[test]
    fn planted_dilation_with_poles() {
        let r = ring();
        let act = OrbitAction::Dilation(rf(&r, "q"));
        let a = rf(&r, "z+1");
        let d = rf(&r, "q*z-3");
        let u = rf(&r, "(z^2+t)/((z-1)*z)");
        let b = &(&act.shift(&u, 0, 1).unwrap() * &d) - &(&a * &u);
        let reg = AssumptionRegistry::new(vec![Fact::parse("not_root_of_unity(q)", &r).unwrap()]).unwrap();
        let s = solve_first_order(&a, &b, &d, 0, &act, &reg, 4).unwrap();
        assert!(s.homogeneous.is_empty());
        assert_eq!(s.particular.unwrap(), u);
    }
}
