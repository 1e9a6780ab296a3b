//! Heuristic gcd for polynomials over `ℚ` (Char, Geddes, Gonnet).
//!
//! Evaluate one variable at a large integer `ξ`, take the gcd of the images
//! recursively, and read the candidate back from its `ξ`-adic expansion. A
//! candidate that divides both inputs is the gcd; otherwise `ξ` grows and the
//! attempt is repeated a few times before giving up.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, Poly};

type Q = BigRational;

const ATTEMPTS: usize = 6;
const MAX_XI_BITS: u64 = 6000;

/// `gcd(a, b)` up to a constant factor, or `None` when the heuristic fails.
pub(crate) fn heuristic_gcd(a: &Poly<Q>, b: &Poly<Q>) -> Option<Poly<Q>> {
    if a.is_zero() || b.is_zero() {
        return None;
    }
    heu(&integral(a), &integral(b))
}

/// `p` scaled to a primitive polynomial with integer coefficients.
fn integral(p: &Poly<Q>) -> Poly<Q> {
    let l = p.terms().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
    let scaled = p.scale(&Q::from_integer(l));
    primitive(&scaled).1
}

fn content(p: &Poly<Q>) -> BigInt {
    p.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()))
}

/// Integer content and primitive part with a positive leading coefficient.
fn primitive(p: &Poly<Q>) -> (BigInt, Poly<Q>) {
    let mut c = content(p);
    if p.leading_coeff().is_negative() {
        c = -c;
    }
    let inv = Q::new(BigInt::one(), c.clone());
    (c, p.scale(&inv))
}

fn max_norm(p: &Poly<Q>) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

fn heu(a: &Poly<Q>, b: &Poly<Q>) -> Option<Poly<Q>> {
    if a.is_zero() || b.is_zero() {
        // an evaluation point hit a root; a larger point may not
        return None;
    }
    let ring = a.ring().clone();
    let (ca, a) = primitive(a);
    let (cb, b) = primitive(b);
    let c = Poly::constant(&ring, Q::from_integer(ca.gcd(&cb)));
    if a.is_constant() || b.is_constant() {
        return Some(c);
    }
    let pa = a.present_vars();
    let pb = b.present_vars();
    let v = (0..pa.len()).find(|&i| pa[i] && pb[i]).or_else(|| (0..pa.len()).find(|&i| pa[i] || pb[i]))?;
    let bound = a.degree_in(v).unwrap_or(0).min(b.degree_in(v).unwrap_or(0)) as usize;
    let mut xi: BigInt = BigInt::from(2) * max_norm(&a).min(max_norm(&b)) + BigInt::from(29);
    for _ in 0..ATTEMPTS {
        if xi.bits() > MAX_XI_BITS {
            return None;
        }
        let at = |p: &Poly<Q>| {
            let mut bind = vec![None; ring.len()];
            bind[v] = Some(Poly::constant(&ring, Q::from_integer(xi.clone())));
            p.compose(&bind)
        };
        if let Some(gamma) = heu(&at(&a), &at(&b)) {
            if let Some(g) = reconstruct(&gamma, &xi, v, bound) {
                let (_, g) = primitive(&g);
                if a.exact_div(&g).is_some() && b.exact_div(&g).is_some() {
                    return Some(&c * &g);
                }
            }
        }
        xi = xi * BigInt::from(73794) / BigInt::from(27011);
    }
    None
}

/// Symmetric remainder of every coefficient modulo `xi`.
fn symmetric_mod(p: &Poly<Q>, xi: &BigInt) -> Poly<Q> {
    let half = xi / 2;
    Poly::from_terms(
        p.ring(),
        p.terms().map(|(m, c)| {
            let mut r = c.numer().mod_floor(xi);
            if r > half {
                r -= xi;
            }
            (m.clone(), Q::from_integer(r))
        }),
    )
}

/// `Σ g_i v^i` with `gamma = Σ g_i ξ^i` and symmetric digits.
fn reconstruct(gamma: &Poly<Q>, xi: &BigInt, v: usize, bound: usize) -> Option<Poly<Q>> {
    let ring = gamma.ring();
    let n = ring.len();
    let xi_inv = Q::new(BigInt::one(), xi.clone());
    let mut rest = gamma.clone();
    let mut out = Poly::zero(ring);
    let mut i = 0u32;
    while !rest.is_zero() {
        if i as usize > bound {
            return None;
        }
        let digit = symmetric_mod(&rest, xi);
        rest = (&rest - &digit).scale(&xi_inv);
        debug_assert!(rest.terms().all(|(_, c)| c.is_integer()));
        let shift = Monomial::var(n, v, i);
        out = &out + &digit.mul_monomial(&shift, &Q::one());
        i += 1;
    }
    (out.leading_coeff().numer().sign() != Sign::NoSign).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{parse_expression, Ring};

    fn p(s: &str) -> Poly<Q> {
        let r = Ring::new(&["x", "y", "q"]).unwrap();
        parse_expression::<Q>(s, &r).unwrap().into_parts().0
    }

    #[test]
    fn recovers_common_factors() {
        let g = heuristic_gcd(&p("(x*y - 2*q + 1)*(x + 3)"), &p("(x*y - 2*q + 1)*(y^2 - q)")).unwrap();
        assert_eq!(g.monic(), p("x*y - 2*q + 1").monic());
        let g = heuristic_gcd(&p("(2*x + 1)^2*(y - 1)"), &p("(2*x + 1)*(y + 1)")).unwrap();
        assert_eq!(g.monic(), p("2*x + 1").monic());
        let g = heuristic_gcd(&p("x^2 + y"), &p("x + q")).unwrap();
        assert!(g.is_constant());
    }

    #[test]
    fn rational_coefficients() {
        let g = heuristic_gcd(&p("(x/2 - 1/3)*(y + 5/7)"), &p("(3*x - 2)*(q - 1/2)")).unwrap();
        assert_eq!(g.monic(), p("x - 2/3"));
    }
}
