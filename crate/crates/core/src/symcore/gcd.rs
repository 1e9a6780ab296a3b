//! Multivariate polynomial gcd over a field.
//!
//! Recursive primitive-PRS: pick the variable of least degree, split off
//! the content with respect to it, and run a primitive pseudo-remainder
//! sequence on the primitive parts. Coefficients of the univariate view are
//! polynomials in the remaining variables, handled by recursion. Coprime
//! inputs are usually recognized first from integer specializations. Over
//! `ℚ` the heuristic gcd is tried before any of this.

use std::any::Any;

use num_rational::BigRational as Q;

use super::field::Field;
use super::heugcd::heuristic_gcd;
use super::poly::{from_u32, Monomial, Poly};

/// Greatest common divisor, normalized to leading coefficient 1.
/// `gcd(0, 0) = 0`.
pub fn gcd<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    if let (Some(qa), Some(qb)) = ((a as &dyn Any).downcast_ref::<Poly<Q>>(), (b as &dyn Any).downcast_ref::<Poly<Q>>()) {
        if let Some(g) = heuristic_gcd(qa, qb) {
            let g: Box<dyn Any> = Box::new(g.monic());
            return *g.downcast::<Poly<F>>().expect("same coefficient type");
        }
    }
    gcd_rec(a, b).monic()
}

pub fn lcm<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    if a.is_zero() || b.is_zero() {
        return Poly::zero(a.ring());
    }
    let g = gcd(a, b);
    (a * &b.exact_div(&g).expect("gcd divides")).monic()
}

fn gcd_rec<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.ring());
    }
    if a == b {
        return a.clone();
    }
    // Cheap exits when one side divides the other.
    let (small, big) = if a.num_terms() <= b.num_terms() { (a, b) } else { (b, a) };
    if small.total_degree() <= big.total_degree() && big.exact_div(small).is_some() {
        return small.clone();
    }

    let pa = a.present_vars();
    let pb = b.present_vars();
    let shared: Vec<usize> = (0..pa.len()).filter(|&i| pa[i] && pb[i]).collect();
    if shared.iter().all(|&v| coprime_in(a, b, v)) {
        return Poly::one(a.ring());
    }
    // the recursion is cheapest along the variable of lowest degree
    let v = (0..pa.len())
        .filter(|&i| pa[i] || pb[i])
        .min_by_key(|&i| a.degree_in(i).unwrap_or(0).max(b.degree_in(i).unwrap_or(0)))
        .expect("nonconstant");
    if !pa[v] {
        return gcd_rec(a, &content_in(b, v));
    }
    if !pb[v] {
        return gcd_rec(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd_rec(&ca, &cb);
    let ppa = a.exact_div(&ca).expect("content divides");
    let ppb = b.exact_div(&cb).expect("content divides");
    let g = primitive_prs(ppa, ppb, v);
    &c * &g
}

/// `p` with every variable except `v` set to a small integer.
fn specialize<F: Field>(p: &Poly<F>, v: usize, seed: u32) -> Poly<F> {
    let n = p.ring().len();
    let point: Vec<F> = (0..n).map(|i| from_u32::<F>(2 + seed + 3 * i as u32)).collect();
    Poly::from_terms(
        p.ring(),
        p.terms().map(|(m, c)| {
            let mut c = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if i != v && e > 0 {
                    c = c * point[i].pow_u32(e);
                }
            }
            (Monomial::var(n, v, m.exp(v)), c)
        }),
    )
}

/// Proves `deg_v gcd(a, b) = 0` when a specialization keeps both degrees in
/// `v` and the specialized gcd is constant. `false` means "not proved".
fn coprime_in<F: Field>(a: &Poly<F>, b: &Poly<F>, v: usize) -> bool {
    if a.present_vars().iter().filter(|&&x| x).count() == 1 && b.present_vars().iter().filter(|&&x| x).count() == 1 {
        return false;
    }
    for seed in 0..2 {
        let (sa, sb) = (specialize(a, v, seed), specialize(b, v, seed));
        if sa.degree_in(v) != a.degree_in(v) || sb.degree_in(v) != b.degree_in(v) {
            continue;
        }
        return primitive_prs(sa, sb, v).degree_in(v).unwrap_or(0) == 0;
    }
    false
}

/// Gcd of the coefficients of `p` viewed as univariate in `v`.
pub fn content_in<F: Field>(p: &Poly<F>, v: usize) -> Poly<F> {
    let mut acc = Poly::zero(p.ring());
    for c in p.coefficients_in(v).into_iter().rev() {
        if c.is_zero() {
            continue;
        }
        acc = gcd_rec(&acc, &c);
        if acc.is_constant() {
            return Poly::one(p.ring());
        }
    }
    acc.monic()
}

pub fn primitive_part_in<F: Field>(p: &Poly<F>, v: usize) -> Poly<F> {
    if p.is_zero() {
        return p.clone();
    }
    p.exact_div(&content_in(p, v)).expect("content divides")
}

fn primitive_prs<F: Field>(a: Poly<F>, b: Poly<F>, v: usize) -> Poly<F> {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    let others = |p: &Poly<F>| p.present_vars().iter().enumerate().any(|(i, &x)| x && i != v);
    if others(&a) || others(&b) {
        return subresultant_prs(a, b, v);
    }
    loop {
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            return b;
        }
        if r.degree_in(v) == Some(0) {
            return Poly::one(a.ring());
        }
        a = b;
        // scaling by a field constant keeps coefficient growth in check
        b = primitive_part_in(&r, v).monic();
    }
}

/// Subresultant sequence on primitive inputs with `deg_v a >= deg_v b`;
/// returns the primitive part of the last nonzero remainder.
fn subresultant_prs<F: Field>(mut a: Poly<F>, mut b: Poly<F>, v: usize) -> Poly<F> {
    let ring = a.ring().clone();
    let lc = |p: &Poly<F>| p.coefficients_in(v).pop().expect("nonzero");
    let mut g = Poly::one(&ring);
    let mut h = Poly::one(&ring);
    loop {
        let delta = a.degree_in(v).unwrap_or(0) - b.degree_in(v).unwrap_or(0);
        let (r, used) = pseudo_remainder_counted(&a, &b, v);
        if r.is_zero() {
            return primitive_part_in(&b, v);
        }
        // the sequence needs the full multiplier lc(b)^(delta + 1)
        let r = &r * &lc(&b).pow(delta + 1 - used);
        if r.degree_in(v) == Some(0) {
            return Poly::one(&ring);
        }
        let div = &g * &h.pow(delta);
        a = b;
        b = r.exact_div(&div).expect("subresultant division is exact");
        g = lc(&a);
        h = if delta == 0 {
            h
        } else {
            g.pow(delta).exact_div(&h.pow(delta - 1)).expect("subresultant division is exact")
        };
    }
}

/// `lc(b)^k * a mod b` in the univariate view over `v`.
pub fn pseudo_remainder<F: Field>(a: &Poly<F>, b: &Poly<F>, v: usize) -> Poly<F> {
    pseudo_remainder_counted(a, b, v).0
}

/// The pseudo-remainder and the number `k` of multiplications by `lc(b)`.
fn pseudo_remainder_counted<F: Field>(a: &Poly<F>, b: &Poly<F>, v: usize) -> (Poly<F>, u32) {
    let ring = a.ring().clone();
    let bc = b.coefficients_in(v);
    let n = bc.len() - 1;
    let lcb = bc[n].clone();
    let mut r = a.coefficients_in(v);
    let mut k = 0;
    while r.len() > n && !r.is_empty() {
        let d = r.len() - 1;
        let lcr = r[d].clone();
        for c in r.iter_mut() {
            *c = &*c * &lcb;
        }
        k += 1;
        for (j, bj) in bc.iter().enumerate() {
            let idx = j + d - n;
            r[idx] = &r[idx] - &(&lcr * bj);
        }
        while r.last().map(|c| c.is_zero()).unwrap_or(false) {
            r.pop();
        }
    }
    if r.is_empty() {
        return (Poly::zero(&ring), k);
    }
    (Poly::from_coefficients_in(&ring, v, &r), k)
}

/// Squarefree decomposition in `v`: returns `(factor, multiplicity)` pairs
/// with pairwise coprime, squarefree factors (Yun). Content in `v` is dropped.
pub fn squarefree_in<F: Field>(p: &Poly<F>, v: usize) -> Vec<(Poly<F>, u32)> {
    let mut out = Vec::new();
    let p = primitive_part_in(p, v);
    if p.degree_in(v).unwrap_or(0) == 0 {
        return out;
    }
    let dp = p.derivative(v);
    let mut a = gcd(&p, &dp);
    let mut b = p.exact_div(&a).unwrap();
    let mut c = dp.exact_div(&a).unwrap();
    let mut d = &c - &b.derivative(v);
    let mut i = 1;
    while b.degree_in(v).unwrap_or(0) > 0 {
        a = gcd(&b, &d);
        if a.degree_in(v).unwrap_or(0) > 0 {
            out.push((primitive_part_in(&a, v), i));
        }
        b = b.exact_div(&a).unwrap();
        c = d.exact_div(&a).unwrap();
        d = &c - &b.derivative(v);
        i += 1;
    }
    out
}
