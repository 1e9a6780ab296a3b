use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};


use super::field::{Field, OrderedField};
use super::gcd::gcd;
use super::poly::{Monomial, Poly};
use super::ring::Ring;
use super::SymError;

/// Element of the fraction field of `Poly<F>` in canonical form:
/// numerator and denominator coprime, denominator with leading
/// coefficient 1 in graded-lex order, zero stored as `0/1`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<RatFunc<F>, SymError> {
        if den.is_zero() {
            return Err(SymError::ZeroDenominator);
        }
        Ok(normalize_parts(num, den))
    }

    pub fn from_poly(p: Poly<F>) -> RatFunc<F> {
        let ring = p.ring().clone();
        RatFunc { num: p, den: Poly::one(&ring) }
    }

    pub fn zero(ring: &Ring) -> RatFunc<F> {
        RatFunc::from_poly(Poly::zero(ring))
    }

    pub fn one(ring: &Ring) -> RatFunc<F> {
        RatFunc::from_poly(Poly::one(ring))
    }

    pub fn constant(ring: &Ring, c: F) -> RatFunc<F> {
        RatFunc::from_poly(Poly::constant(ring, c))
    }

    pub fn var(ring: &Ring, i: usize) -> RatFunc<F> {
        RatFunc::from_poly(Poly::var(ring, i))
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn into_parts(self) -> (Poly<F>, Poly<F>) {
        (self.num, self.den)
    }

    pub fn ring(&self) -> &Ring {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<F> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n / d)
    }

    pub fn involves(&self, v: usize) -> bool {
        self.num.involves(v) || self.den.involves(v)
    }

    pub fn present_vars(&self) -> Vec<bool> {
        let a = self.num.present_vars();
        let b = self.den.present_vars();
        a.into_iter().zip(b).map(|(x, y)| x || y).collect()
    }

    /// Re-run canonicalization; idempotent on values built by this type.
    pub fn normalize(&self) -> RatFunc<F> {
        normalize_parts(self.num.clone(), self.den.clone())
    }

    pub fn inv(&self) -> Result<RatFunc<F>, SymError> {
        if self.is_zero() {
            return Err(SymError::ZeroDenominator);
        }
        Ok(normalize_scalar(self.den.clone(), self.num.clone()))
    }

    pub fn try_div(&self, rhs: &RatFunc<F>) -> Result<RatFunc<F>, SymError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, c: &F) -> RatFunc<F> {
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc<F>, SymError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Ok(RatFunc { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn differentiate(&self, v: usize) -> RatFunc<F> {
        let dn = self.num.derivative(v);
        if self.den.is_constant() {
            return RatFunc { num: dn, den: self.den.clone() };
        }
        let dd = self.den.derivative(v);
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        let den = &self.den * &self.den;
        normalize_parts(num, den)
    }

    /// Simultaneous substitution. `bindings[i] = Some(r)` replaces variable
    /// `i` by `r`; unbound variables stay.
    pub fn substitute(&self, bindings: &[Option<RatFunc<F>>]) -> Result<RatFunc<F>, SymError> {
        if bindings.iter().all(|b| b.is_none()) {
            return Ok(self.clone());
        }
        let (mut nn, en) = eval_poly(&self.num, bindings);
        let (mut dn, ed) = eval_poly(&self.den, bindings);
        if dn.is_zero() {
            return Err(SymError::SubstitutionPole);
        }
        // only the surplus powers of each binding denominator survive
        for (i, b) in bindings.iter().enumerate() {
            let Some(b) = b else { continue };
            if b.den().is_one() || en[i] == ed[i] {
                continue;
            }
            if en[i] > ed[i] {
                dn = &dn * &b.den().pow(en[i] - ed[i]);
            } else {
                nn = &nn * &b.den().pow(ed[i] - en[i]);
            }
        }
        Ok(normalize_parts(nn, dn))
    }

    /// Substitution by variable name.
    pub fn substitute_named(&self, pairs: &[(&str, RatFunc<F>)]) -> Result<RatFunc<F>, SymError> {
        let mut b = vec![None; self.ring().len()];
        for (name, r) in pairs {
            let i = self.ring().require(name)?;
            b[i] = Some(r.clone());
        }
        self.substitute(&b)
    }

    /// Same value seen in a larger (or reordered) ring.
    pub fn embed(&self, ring: &Ring) -> Option<RatFunc<F>> {
        let num = self.num.embed(ring)?;
        let den = self.den.embed(ring)?;
        Some(normalize_parts(num, den))
    }

    /// Cross-multiplication equality, independent of representation.
    pub fn equals_cross(&self, other: &RatFunc<F>) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

/// Evaluate a polynomial under rational bindings. The value is the returned
/// polynomial over `Π D_v^{e_v}`, where `v -> N_v/D_v` and `e_v = deg_v p`;
/// no gcds are needed here.
fn eval_poly<F: Field>(p: &Poly<F>, bindings: &[Option<RatFunc<F>>]) -> (Poly<F>, Vec<u32>) {
    let ring = p.ring().clone();
    let n = ring.len();
    let mut max_deg = vec![0u32; n];
    for (m, _) in p.terms() {
        for i in 0..n {
            max_deg[i] = max_deg[i].max(m.exp(i));
        }
    }
    let mut num_pows: Vec<Vec<Poly<F>>> = vec![Vec::new(); n];
    let mut den_pows: Vec<Vec<Poly<F>>> = vec![Vec::new(); n];
    for i in 0..n {
        if let Some(b) = &bindings[i] {
            let e = max_deg[i] as usize;
            if e == 0 {
                continue;
            }
            num_pows[i] = powers(b.num(), e);
            if !b.den().is_one() {
                den_pows[i] = powers(b.den(), e);
            }
        }
    }
    let mut acc = Poly::zero(&ring);
    for (m, c) in p.terms() {
        let mut kept = m.exponents().to_vec();
        let mut term = Poly::one(&ring);
        for i in 0..n {
            if bindings[i].is_none() || max_deg[i] == 0 {
                continue;
            }
            let e = m.exp(i) as usize;
            kept[i] = 0;
            if e > 0 {
                term = &term * &num_pows[i][e];
            }
            if !den_pows[i].is_empty() {
                let rest = max_deg[i] as usize - e;
                if rest > 0 {
                    term = &term * &den_pows[i][rest];
                }
            }
        }
        acc.add_assign_ref(&term.mul_monomial(&Monomial::from_exponents(kept), c));
    }
    (acc, max_deg)
}

fn powers<F: Field>(p: &Poly<F>, e: usize) -> Vec<Poly<F>> {
    let mut v = Vec::with_capacity(e + 1);
    v.push(Poly::one(p.ring()));
    for k in 1..=e {
        let next = &v[k - 1] * p;
        v.push(next);
    }
    v
}

fn normalize_parts<F: Field>(num: Poly<F>, den: Poly<F>) -> RatFunc<F> {
    let ring = num.ring().clone();
    if num.is_zero() {
        return RatFunc { num, den: Poly::one(&ring) };
    }
    if den.is_constant() {
        return normalize_scalar(num, den);
    }
    let g = gcd(&num, &den);
    if g.is_one() {
        return normalize_scalar(num, den);
    }
    let num = num.exact_div(&g).expect("gcd divides numerator");
    let den = den.exact_div(&g).expect("gcd divides denominator");
    normalize_scalar(num, den)
}

/// Make the denominator's leading coefficient 1; assumes coprime parts.
fn normalize_scalar<F: Field>(num: Poly<F>, den: Poly<F>) -> RatFunc<F> {
    let lc = den.leading_coeff();
    if lc.is_one() {
        return RatFunc { num, den };
    }
    let inv = lc.inv();
    RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
}

impl<'a, F: Field> Add<&'a RatFunc<F>> for &'a RatFunc<F> {
    type Output = RatFunc<F>;
    fn add(self, rhs: &RatFunc<F>) -> RatFunc<F> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RatFunc { num, den: self.den.clone() };
            }
            return normalize_parts(num, self.den.clone());
        }
        if self.den.is_one() {
            let num = &(&self.num * &rhs.den) + &rhs.num;
            return RatFunc { num, den: rhs.den.clone() };
        }
        if rhs.den.is_one() {
            let num = &self.num + &(&rhs.num * &self.den);
            return RatFunc { num, den: self.den.clone() };
        }
        let g = gcd(&self.den, &rhs.den);
        let d1 = self.den.exact_div(&g).unwrap();
        let d2 = rhs.den.exact_div(&g).unwrap();
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        let den = &self.den * &d2;
        normalize_parts(num, den)
    }
}

impl<'a, F: Field> Sub<&'a RatFunc<F>> for &'a RatFunc<F> {
    type Output = RatFunc<F>;
    fn sub(self, rhs: &RatFunc<F>) -> RatFunc<F> {
        self + &(-rhs)
    }
}

impl<'a, F: Field> Mul<&'a RatFunc<F>> for &'a RatFunc<F> {
    type Output = RatFunc<F>;
    fn mul(self, rhs: &RatFunc<F>) -> RatFunc<F> {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.ring());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc { num: &self.num * &rhs.num, den: self.den.clone() };
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = rhs.den.exact_div(&g1).unwrap();
        let n2 = rhs.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        normalize_scalar(&n1 * &n2, &d1 * &d2)
    }
}

impl<'a, F: Field> Div<&'a RatFunc<F>> for &'a RatFunc<F> {
    type Output = RatFunc<F>;
    /// Panics on division by zero; use [`RatFunc::try_div`] otherwise.
    fn div(self, rhs: &RatFunc<F>) -> RatFunc<F> {
        self.try_div(rhs).expect("division by zero rational function")
    }
}

impl<F: Field> Neg for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn neg(self) -> RatFunc<F> {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl<F: Field> Neg for RatFunc<F> {
    type Output = RatFunc<F>;
    fn neg(self) -> RatFunc<F> {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<F: Field> $tr<RatFunc<F>> for RatFunc<F> {
            type Output = RatFunc<F>;
            fn $f(self, rhs: RatFunc<F>) -> RatFunc<F> {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<F: Field> From<Poly<F>> for RatFunc<F> {
    fn from(p: Poly<F>) -> RatFunc<F> {
        RatFunc::from_poly(p)
    }
}

impl<F: OrderedField> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let bare = self.den.num_terms() == 1 && {
            let (m, c) = self.den.leading().unwrap();
            c.is_one() && m.exponents().iter().filter(|&&e| e > 0).count() == 1
        };
        if bare {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl<F: OrderedField> fmt::Debug for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
