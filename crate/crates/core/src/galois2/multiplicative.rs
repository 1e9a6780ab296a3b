//! Multiplicative relations in the rational function field `ℚ(params)`.
//!
//! Every nonzero element factors as a sign, integers from a coprime basis and
//! polynomials from a gcd-free basis. Relations are the integer kernel of the
//! exponent matrix, cut down by the parity of the signs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lattice::{hnf, integer_kernel};
use crate::symcore::gcd;
use crate::{Error, Poly, RatFunc, Rational, Result};

/// Basis (Hermite form) of `{t ∈ ℤ^k : Π values[i]^t[i] = 1}`.
pub fn multiplicative_relations(values: &[RatFunc]) -> Result<Vec<Vec<i64>>> {
    let k = values.len();
    let mut polys: Vec<Poly> = Vec::new();
    let mut ints: Vec<BigInt> = Vec::new();
    let mut signs = vec![false; k];
    let mut pieces: Vec<(Vec<Poly>, Vec<Poly>, Rational)> = Vec::with_capacity(k);
    for (i, v) in values.iter().enumerate() {
        if v.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let (n, d) = (v.num(), v.den());
        let c = n.leading_coeff() / d.leading_coeff();
        signs[i] = c.is_negative();
        let c = c.abs();
        for x in [c.numer(), c.denom()] {
            if !x.is_one() {
                ints.push(x.clone());
            }
        }
        let nm = n.monic();
        let dm = d.monic();
        for p in [&nm, &dm] {
            if !p.is_constant() {
                polys.push(p.clone());
            }
        }
        pieces.push((vec![nm], vec![dm], c));
    }
    let ibasis = integer_coprime_basis(ints);
    let pbasis = poly_coprime_basis(polys);
    let cols = ibasis.len() + pbasis.len();
    // exponent matrix: one row per basis element, one column per value
    let mut m = vec![vec![0i64; k]; cols];
    for (j, (nums, dens, c)) in pieces.iter().enumerate() {
        for (r, b) in ibasis.iter().enumerate() {
            m[r][j] = int_valuation(c.numer(), b) - int_valuation(c.denom(), b);
        }
        for (r, b) in pbasis.iter().enumerate() {
            let e: i64 = nums.iter().map(|p| poly_valuation(p, b)).sum::<i64>()
                - dens.iter().map(|p| poly_valuation(p, b)).sum::<i64>();
            m[ibasis.len() + r][j] = e;
        }
    }
    let kernel = integer_kernel(&m, k);
    Ok(parity_filter(kernel, &signs))
}

/// Sublattice of `basis` on which the number of negative factors is even.
fn parity_filter(basis: Vec<Vec<i64>>, signs: &[bool]) -> Vec<Vec<i64>> {
    let parity = |v: &[i64]| v.iter().zip(signs).filter(|(_, &s)| s).map(|(x, _)| x.rem_euclid(2)).sum::<i64>() % 2;
    let Some(p) = basis.iter().position(|v| parity(v) == 1) else { return basis };
    let pivot = basis[p].clone();
    let mut out: Vec<Vec<i64>> = Vec::with_capacity(basis.len());
    for (i, v) in basis.iter().enumerate() {
        if i == p {
            out.push(v.iter().map(|x| 2 * x).collect());
        } else if parity(v) == 1 {
            out.push(v.iter().zip(&pivot).map(|(a, b)| a - b).collect());
        } else {
            out.push(v.clone());
        }
    }
    hnf(&out)
}

fn integer_coprime_basis(mut xs: Vec<BigInt>) -> Vec<BigInt> {
    xs.retain(|x| x > &BigInt::one());
    loop {
        xs.sort();
        xs.dedup();
        let mut split = None;
        'outer: for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                let g = xs[i].gcd(&xs[j]);
                if !g.is_one() {
                    split = Some((i, j, g));
                    break 'outer;
                }
            }
        }
        let Some((i, j, g)) = split else { return xs };
        let a = &xs[i] / &g;
        let b = &xs[j] / &g;
        xs.remove(j);
        xs.remove(i);
        xs.extend([a, b, g].into_iter().filter(|x| x > &BigInt::one()));
    }
}

fn int_valuation(x: &BigInt, b: &BigInt) -> i64 {
    let mut x = x.clone();
    let mut e = 0;
    while !x.is_zero() && (&x % b).is_zero() {
        x /= b;
        e += 1;
    }
    e
}

/// Pairwise coprime nonconstant monic polynomials generating the same
/// multiplicative monoid (up to constants) as the inputs.
pub fn poly_coprime_basis(mut xs: Vec<Poly>) -> Vec<Poly> {
    xs = xs.into_iter().filter(|p| !p.is_constant()).map(|p| p.monic()).collect();
    loop {
        dedup_polys(&mut xs);
        let mut split = None;
        'outer: for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                let g = gcd(&xs[i], &xs[j]);
                if !g.is_constant() {
                    split = Some((i, j, g));
                    break 'outer;
                }
            }
        }
        let Some((i, j, g)) = split else { return xs };
        let a = xs[i].exact_div(&g).expect("gcd divides");
        let b = xs[j].exact_div(&g).expect("gcd divides");
        xs.remove(j);
        xs.remove(i);
        xs.extend([a, b, g].into_iter().filter(|p| !p.is_constant()).map(|p| p.monic()));
    }
}

fn dedup_polys(xs: &mut Vec<Poly>) {
    let mut out: Vec<Poly> = Vec::with_capacity(xs.len());
    for p in xs.drain(..) {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    *xs = out;
}

/// Largest `e` with `b^e | p`.
pub fn poly_valuation(p: &Poly, b: &Poly) -> i64 {
    let mut p = p.clone();
    let mut e = 0;
    while let Some(q) = p.exact_div(b) {
        p = q;
        e += 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{parse_expression, Ring};

    fn rf(ring: &Ring, s: &str) -> RatFunc {
        parse_expression(s, ring).unwrap()
    }

    #[test]
    fn rational_relations() {
        let r = Ring::new(&["q"]).unwrap();
        let rel = multiplicative_relations(&[rf(&r, "4"), rf(&r, "8")]).unwrap();
        assert_eq!(rel, vec![vec![3, -2]]);
        let rel = multiplicative_relations(&[rf(&r, "-2"), rf(&r, "4")]).unwrap();
        assert_eq!(rel, vec![vec![2, -1]]);
        assert!(multiplicative_relations(&[rf(&r, "2"), rf(&r, "3")]).unwrap().is_empty());
        assert_eq!(multiplicative_relations(&[rf(&r, "-1")]).unwrap(), vec![vec![2]]);
    }

    #[test]
    fn parametric_relations() {
        let r = Ring::new(&["q", "qb", "t"]).unwrap();
        let vals = [rf(&r, "q*qb"), rf(&r, "q"), rf(&r, "qb")];
        assert_eq!(multiplicative_relations(&vals).unwrap(), vec![vec![1, -1, -1]]);
        let vals = [rf(&r, "q/(q+q*t)"), rf(&r, "1+t")];
        assert_eq!(multiplicative_relations(&vals).unwrap(), vec![vec![1, 1]]);
        let vals = [rf(&r, "q"), rf(&r, "qb")];
        assert!(multiplicative_relations(&vals).unwrap().is_empty());
        let vals = [rf(&r, "(q-1)^2"), rf(&r, "1-q")];
        assert_eq!(multiplicative_relations(&vals).unwrap(), vec![vec![1, -2]]);
    }
}
