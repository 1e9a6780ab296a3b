use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, OrderedField};
use super::ring::Ring;

/// Exponent vector, ordered graded-lexicographically in the ring's
/// declared variable order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Monomial {
        let mut v = vec![0; nvars];
        v[i] = e;
        Monomial(v)
    }

    pub fn from_exponents(e: Vec<u32>) -> Monomial {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }

    fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut v = self.0.clone();
        v[i] = e;
        Monomial(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => self.0.cmp(&other.0),
            o => o,
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over a field.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone)]
pub struct Poly<F: Field> {
    ring: Ring,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Poly<F>) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl<F: Field> Eq for Poly<F> {}

impl<F: Field> Poly<F> {
    pub fn zero(ring: &Ring) -> Poly<F> {
        Poly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Ring) -> Poly<F> {
        Poly::constant(ring, F::one())
    }

    pub fn constant(ring: &Ring, c: F) -> Poly<F> {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ring.len()), c);
        }
        Poly { ring: ring.clone(), terms }
    }

    pub fn var(ring: &Ring, i: usize) -> Poly<F> {
        Poly::monomial(ring, Monomial::var(ring.len(), i, 1), F::one())
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: F) -> Poly<F> {
        assert_eq!(m.0.len(), ring.len(), "monomial arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { ring: ring.clone(), terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, F)>>(ring: &Ring, it: I) -> Poly<F> {
        let mut p = Poly::zero(ring);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms.keys().next().unwrap().is_one(),
            _ => false,
        }
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<F> {
        match self.terms.len() {
            0 => Some(F::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> F {
        self.terms
            .get(&Monomial::one(self.ring.len()))
            .cloned()
            .unwrap_or_else(F::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> F {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(F::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading().map(|(m, _)| m.degree())
    }

    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[v]).max()
    }

    pub fn min_degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[v]).min()
    }

    pub fn involves(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    pub fn present_vars(&self) -> Vec<bool> {
        let mut out = vec![false; self.ring.len()];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    out[i] = true;
                }
            }
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = existing.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Poly<F>) {
        debug_assert!(self.ring == other.ring, "ring mismatch");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &F) -> Poly<F> {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())).collect(),
        }
    }

    /// Divide by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Poly<F> {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &F) -> Poly<F> {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly<F> {
        let mut acc = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `v`;
    /// entry `i` multiplies `v^i`.
    pub fn coefficients_in(&self, v: usize) -> Vec<Poly<F>> {
        let deg = match self.degree_in(v) {
            None => return Vec::new(),
            Some(d) => d as usize,
        };
        let mut out = vec![Poly::zero(&self.ring); deg + 1];
        for (m, c) in &self.terms {
            let e = m.0[v] as usize;
            out[e].terms.insert(m.with_exp(v, 0), c.clone());
        }
        out
    }

    pub fn from_coefficients_in(ring: &Ring, v: usize, coeffs: &[Poly<F>]) -> Poly<F> {
        let mut p = Poly::zero(ring);
        for (i, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                debug_assert_eq!(m.0[v], 0);
                p.add_term(m.with_exp(v, i as u32), a.clone());
            }
        }
        p
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly<F>) -> Option<Poly<F>> {
        assert!(!d.is_zero(), "exact_div by zero polynomial");
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.inv()));
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let dc_inv = dc.inv();
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.ring);
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = rm.div(&dm)?;
            let qc = rc * dc_inv.clone();
            for (m, c) in &d.terms {
                rem.add_term(m.mul(&qm), -(c.clone() * qc.clone()));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn derivative(&self, v: usize) -> Poly<F> {
        let mut p = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e > 0 {
                p.add_term(m.with_exp(v, e - 1), c.clone() * from_u32::<F>(e));
            }
        }
        p
    }

    /// Simultaneous polynomial substitution; `None` keeps the variable.
    pub fn compose(&self, bindings: &[Option<Poly<F>>]) -> Poly<F> {
        assert_eq!(bindings.len(), self.ring.len());
        let mut cache: Vec<Vec<Poly<F>>> = vec![Vec::new(); bindings.len()];
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut kept = m.clone();
            let mut term = Poly::one(&self.ring);
            for (i, b) in bindings.iter().enumerate() {
                let e = m.0[i] as usize;
                if let (Some(b), true) = (b, e > 0) {
                    kept.0[i] = 0;
                    let pw = &mut cache[i];
                    if pw.is_empty() {
                        pw.push(Poly::one(&self.ring));
                    }
                    while pw.len() <= e {
                        let next = pw.last().unwrap() * b;
                        pw.push(next);
                    }
                    term = &term * &pw[e];
                }
            }
            out.add_assign_ref(&term.mul_monomial(&kept, c));
        }
        out
    }

    /// Reinterpret in another ring that contains every variable used here.
    pub fn embed(&self, ring: &Ring) -> Option<Poly<F>> {
        if *ring == self.ring {
            return Some(self.clone());
        }
        let map: Vec<Option<usize>> = self.ring.names().iter().map(|n| ring.index_of(n)).collect();
        let mut out = Poly::zero(ring);
        for (m, c) in &self.terms {
            let mut e = vec![0; ring.len()];
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    e[map[i]?] = x;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Some(out)
    }

    pub fn map_coeffs<G: FnMut(&F) -> F>(&self, mut g: G) -> Poly<F> {
        Poly::from_terms(&self.ring, self.terms.iter().map(|(m, c)| (m.clone(), g(c))))
    }
}

pub(crate) fn from_u32<F: Field>(n: u32) -> F {
    let mut acc = F::zero();
    let mut base = F::one();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc + base.clone();
        }
        base = base.clone() + base;
        n >>= 1;
    }
    acc
}

impl<'a, F: Field> Add<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        debug_assert!(self.ring == rhs.ring, "ring mismatch");
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, F: Field> Sub<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        debug_assert!(self.ring == rhs.ring, "ring mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a, F: Field> Mul<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        debug_assert!(self.ring == rhs.ring, "ring mismatch");
        let mut out = Poly::zero(&self.ring);
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return rhs.mul_monomial(m, c);
        }
        if rhs.terms.len() == 1 {
            let (m, c) = rhs.terms.iter().next().unwrap();
            return self.mul_monomial(m, c);
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<F: Field> $tr<Poly<F>> for Poly<F> {
            type Output = Poly<F>;
            fn $f(self, rhs: Poly<F>) -> Poly<F> {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        -&self
    }
}

impl<F: OrderedField> Poly<F> {
    fn fmt_monomial(&self, m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(self.ring.name(i))?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

// Unary minus binds to a base in the expression grammar, so "-x^2" would
// read back as (-x)^2. A leading negative unit term whose first factor
// carries an exponent is therefore written "-1*x^2".
impl<F: OrderedField> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                let first_exp = m.0.iter().find(|&&e| e > 0).copied().unwrap_or(0);
                if k == 0 && neg && first_exp > 1 {
                    f.write_str("1*")?;
                }
                self.fmt_monomial(m, f)?;
            } else {
                write!(f, "{}*", a)?;
                self.fmt_monomial(m, f)?;
            }
        }
        Ok(())
    }
}

impl<F: OrderedField> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type P = Poly<BigRational>;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        let a = Monomial(vec![1, 0]);
        let b = Monomial(vec![0, 1]);
        let c = Monomial(vec![0, 2]);
        assert!(a > b);
        assert!(c > a);
    }

    #[test]
    fn exact_division_and_failure() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let x = P::var(&r, 0);
        let y = P::var(&r, 1);
        let one = P::one(&r);
        let a = &(&x - &one) * &(&x + &y);
        assert_eq!(a.exact_div(&(&x + &y)).unwrap(), &x - &one);
        assert!(a.exact_div(&(&x + &one)).is_none());
    }

    #[test]
    fn display_keeps_leading_sign_parseable() {
        let r = Ring::new(&["x"]).unwrap();
        let x = P::var(&r, 0);
        let p = -&(&x * &x) + P::constant(&r, q(3));
        assert_eq!(p.to_string(), "-1*x^2 + 3");
        let p = -&x + P::constant(&r, q(-1));
        assert_eq!(p.to_string(), "-x - 1");
    }

    #[test]
    fn compose_is_simultaneous() {
        let r = Ring::new(&["x", "y"]).unwrap();
        let x = P::var(&r, 0);
        let y = P::var(&r, 1);
        let p = &x - &y;
        let swapped = p.compose(&[Some(y.clone()), Some(x.clone())]);
        assert_eq!(swapped, &y - &x);
    }
}
