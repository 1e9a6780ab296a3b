//! Exact square roots over ℚ(params).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::poly::Poly;
use super::ratfunc::RatFunc;

type Q = BigRational;

pub fn rational_sqrt(c: &Q) -> Option<Q> {
    if c.is_negative() {
        return None;
    }
    let n = int_sqrt(c.numer())?;
    let d = int_sqrt(c.denom())?;
    Some(Q::new(n, d))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Square root of a polynomial, if it is a perfect square over ℚ.
/// The root returned has a positive leading coefficient.
pub fn poly_sqrt(p: &Poly<Q>) -> Option<Poly<Q>> {
    let ring = p.ring().clone();
    if p.is_zero() {
        return Some(p.clone());
    }
    let (lm, lc) = p.leading().map(|(m, c)| (m.clone(), c.clone()))?;
    let half: Vec<u32> = lm.exponents().iter().map(|e| (e % 2 == 0).then_some(e / 2)).collect::<Option<_>>()?;
    let lead_m = super::poly::Monomial::from_exponents(half);
    let lead_c = rational_sqrt(&lc)?;
    let lead = Poly::monomial(&ring, lead_m.clone(), lead_c.clone());
    let two_lead_c = &lead_c + &lead_c;
    let mut root = lead.clone();
    let mut last = lead_m.clone();
    let mut rem = p - &(&lead * &lead);
    while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
        let m = rm.div(&lead_m)?;
        if m >= last {
            return None;
        }
        let t = Poly::monomial(&ring, m.clone(), rc / &two_lead_c);
        rem = &(&rem - &(&(&root + &root) * &t)) - &(&t * &t);
        root = &root + &t;
        last = m;
    }
    Some(root)
}

pub fn ratfunc_sqrt(r: &RatFunc<Q>) -> Option<RatFunc<Q>> {
    if r.is_zero() {
        return Some(r.clone());
    }
    let n = poly_sqrt(r.num())?;
    let d = poly_sqrt(r.den())?;
    RatFunc::new(n, d).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::parse::parse_expression;
    use crate::symcore::ring::Ring;

    fn e(s: &str) -> RatFunc<Q> {
        parse_expression(s, &Ring::new(&["z", "a", "b"]).unwrap()).unwrap()
    }

    #[test]
    fn perfect_squares() {
        let r = ratfunc_sqrt(&e("(a - b)^2*z^2/(4*(z+1)^2)")).unwrap();
        assert_eq!(&r * &r, e("(a - b)^2*z^2/(4*(z+1)^2)"));
        assert_eq!(rational_sqrt(&Q::new(9.into(), 4.into())), Some(Q::new(3.into(), 2.into())));
    }

    #[test]
    fn non_squares() {
        assert!(ratfunc_sqrt(&e("z^2 + 1")).is_none());
        assert!(ratfunc_sqrt(&e("2*z^2")).is_none());
        assert!(ratfunc_sqrt(&e("-1*(z+1)^2")).is_none());
        assert!(ratfunc_sqrt(&e("a*b")).is_none());
    }
}
