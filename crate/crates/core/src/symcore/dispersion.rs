//! Orbit shifts under a normalized Moebius action.
//!
//! With symbolic parameters the candidate shifts are found on a few random
//! rational specializations, where root bounds make the search finite, and
//! then every surviving candidate is confirmed with an exact multivariate gcd.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gcd::gcd;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::SymError;

type Q = BigRational;

const SAMPLES: usize = 3;
const MAX_SHIFT: i64 = 4096;

/// `z -> z + h` or `z -> q z`, with `h`, `q` free of `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitAction {
    Translation(RatFunc<Q>),
    Dilation(RatFunc<Q>),
}

impl OrbitAction {
    pub fn parameter(&self) -> &RatFunc<Q> {
        match self {
            OrbitAction::Translation(h) | OrbitAction::Dilation(h) => h,
        }
    }

    pub fn is_dilation(&self) -> bool {
        matches!(self, OrbitAction::Dilation(_))
    }

    /// The image of `z` under `φ^k`.
    pub fn iterate_var(&self, z: usize, k: i64) -> Result<RatFunc<Q>, SymError> {
        let ring = self.parameter().ring();
        let zv = RatFunc::var(ring, z);
        Ok(match self {
            OrbitAction::Translation(h) => &zv + &h.scale(&Q::from_integer(k.into())),
            OrbitAction::Dilation(q) => &zv * &q.pow(k)?,
        })
    }

    /// `r(φ^k z)`.
    pub fn shift(&self, r: &RatFunc<Q>, z: usize, k: i64) -> Result<RatFunc<Q>, SymError> {
        let mut b = vec![None; r.ring().len()];
        b[z] = Some(self.iterate_var(z, k)?);
        r.substitute(&b)
    }

    /// Numerator of `p(φ^k z)`; equals `p(φ^k z)` up to a factor free of `z`.
    pub fn shift_poly(&self, p: &Poly<Q>, z: usize, k: i64) -> Result<Poly<Q>, SymError> {
        Ok(self.shift(&RatFunc::from_poly(p.clone()), z, k)?.into_parts().0)
    }

    fn validate(&self, z: usize) -> Result<(), SymError> {
        let t = self.parameter();
        if t.involves(z) {
            return Err(SymError::NotNormalized);
        }
        match self {
            OrbitAction::Translation(h) if h.is_zero() => Err(SymError::Periodic),
            OrbitAction::Dilation(q) if q.is_zero() => Err(SymError::NotNormalized),
            OrbitAction::Dilation(q) => match q.constant_value() {
                Some(c) if c.abs().is_one() => Err(SymError::Periodic),
                _ => Ok(()),
            },
            _ => Ok(()),
        }
    }
}

/// Whether `p` and `r` share a factor of positive degree in `z`.
pub fn shares_factor_in(p: &Poly<Q>, r: &Poly<Q>, z: usize) -> bool {
    if coprime_mod_prime(p, r, z) {
        return false;
    }
    gcd(p, r).degree_in(z).unwrap_or(0) > 0
}

/// All `k >= 0` such that `gcd(p(z), r(φ^k z))` has positive degree in `z`.
///
/// For dilations the factor `z` is ignored, since it is fixed by every shift.
pub fn dispersion_set(
    p: &Poly<Q>,
    r: &Poly<Q>,
    z: usize,
    action: &OrbitAction,
) -> Result<BTreeSet<u32>, SymError> {
    action.validate(z)?;
    if p.is_zero() || r.is_zero() {
        return Err(SymError::ZeroDenominator);
    }
    let (p, r) = if action.is_dilation() { (strip_z(p, z), strip_z(r, z)) } else { (p.clone(), r.clone()) };
    let mut out = BTreeSet::new();
    if p.degree_in(z).unwrap_or(0) == 0 || r.degree_in(z).unwrap_or(0) == 0 {
        return Ok(out);
    }
    let params: Vec<usize> = {
        let a = p.present_vars();
        let b = r.present_vars();
        let c = action.parameter().present_vars();
        (0..a.len()).filter(|&i| i != z && (a[i] || b[i] || c[i])).collect()
    };
    let candidates = if params.is_empty() {
        numeric_candidates(&p, &r, z, action, &[], &[])
            .ok_or_else(|| SymError::Dimension("shift range exceeds the search limit".into()))?
    } else {
        sampled_candidates(&p, &r, z, action, &params)?
    };
    for k in candidates {
        let shifted = action.shift_poly(&r, z, k as i64)?;
        if shares_factor_in(&p, &shifted, z) {
            out.insert(k);
        }
    }
    Ok(out)
}

fn strip_z(p: &Poly<Q>, z: usize) -> Poly<Q> {
    let m = p.min_degree_in(z).unwrap_or(0);
    if m == 0 {
        return p.clone();
    }
    let zm = Poly::var(p.ring(), z).pow(m);
    p.exact_div(&zm).expect("power of z divides")
}

fn sampled_candidates(
    p: &Poly<Q>,
    r: &Poly<Q>,
    z: usize,
    action: &OrbitAction,
    params: &[usize],
) -> Result<BTreeSet<u32>, SymError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d15b);
    let mut acc: Option<BTreeSet<u32>> = None;
    let mut found = 0;
    let mut attempts = 0;
    while found < SAMPLES {
        attempts += 1;
        if attempts > 200 {
            return Err(SymError::Dimension("no admissible parameter specialization found".into()));
        }
        let values: Vec<Q> = params.iter().map(|_| random_rational(&mut rng)).collect();
        if let Some(c) = numeric_candidates(p, r, z, action, params, &values) {
            found += 1;
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersection(&c).copied().collect(),
            });
        }
    }
    Ok(acc.unwrap_or_default())
}

fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    let n: i64 = rng.gen_range(-97..=97);
    let d: i64 = rng.gen_range(1..=13);
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Candidate shifts for one specialization, or `None` when the
/// specialization is degenerate (degree drop, `|q| ~ 1`, range too large).
fn numeric_candidates(
    p: &Poly<Q>,
    r: &Poly<Q>,
    z: usize,
    action: &OrbitAction,
    params: &[usize],
    values: &[Q],
) -> Option<BTreeSet<u32>> {
    let ring = p.ring();
    let mut bind: Vec<Option<Poly<Q>>> = vec![None; ring.len()];
    for (&i, v) in params.iter().zip(values) {
        bind[i] = Some(Poly::constant(ring, v.clone()));
    }
    let spec = |x: &Poly<Q>| x.compose(&bind);
    let ps = spec(p);
    let rs = spec(r);
    if ps.degree_in(z) != p.degree_in(z) || rs.degree_in(z) != r.degree_in(z) {
        return None;
    }
    let t = action.parameter();
    let tden = spec(t.den()).constant_value()?;
    if tden.is_zero() {
        return None;
    }
    let t0 = spec(t.num()).constant_value()? / tden;
    let (pmin, pmax) = root_bounds(&ps, z)?;
    let (rmin, rmax) = root_bounds(&rs, z)?;
    let kmax = match action {
        OrbitAction::Translation(_) => {
            if t0.is_zero() {
                return None;
            }
            ((pmax + rmax) / t0.abs().to_f64()?).floor()
        }
        OrbitAction::Dilation(_) => {
            let lq = t0.abs().to_f64()?.ln().abs();
            if t0.is_zero() || lq < 0.2 {
                return None;
            }
            let spread = (rmax.ln() - pmin.ln()).abs().max((rmin.ln() - pmax.ln()).abs());
            (spread / lq).ceil()
        }
    };
    if !kmax.is_finite() || kmax as i64 > MAX_SHIFT {
        return None;
    }
    let kmax = kmax as i64 + 1;
    let specialized = match action {
        OrbitAction::Translation(_) => OrbitAction::Translation(RatFunc::constant(ring, t0)),
        OrbitAction::Dilation(_) => OrbitAction::Dilation(RatFunc::constant(ring, t0)),
    };
    let mut out = BTreeSet::new();
    for k in 0..=kmax {
        let shifted = specialized.shift_poly(&rs, z, k).ok()?;
        if shares_factor_in(&ps, &shifted, z) {
            out.insert(k as u32);
        }
    }
    Some(out)
}

/// Lower and upper bounds on the moduli of the nonzero roots of a
/// univariate polynomial in `z` (Fujiwara, applied to `p` and its reversal).
fn root_bounds(p: &Poly<Q>, z: usize) -> Option<(f64, f64)> {
    let coeffs: Vec<f64> = p
        .coefficients_in(z)
        .iter()
        .map(|c| c.constant_value().map(|v| v.to_f64().unwrap_or(f64::NAN)))
        .collect::<Option<_>>()?;
    let lo = coeffs.iter().position(|c| *c != 0.0)?;
    let c = &coeffs[lo..];
    if c.len() == 1 {
        return Some((1.0, 1.0));
    }
    let upper = fujiwara(c.iter().rev().copied());
    let lower = 1.0 / fujiwara(c.iter().copied());
    (upper.is_finite() && lower.is_finite() && lower > 0.0).then_some((lower, upper))
}

/// `2 max |a_{n-i}/a_n|^{1/i}` for coefficients listed from the leading one down,
/// with the constant term halved.
fn fujiwara(from_lead: impl Iterator<Item = f64>) -> f64 {
    let c: Vec<f64> = from_lead.collect();
    let n = c.len() - 1;
    let lead = c[0].abs();
    let mut m = 0.0f64;
    for (i, a) in c.iter().enumerate().skip(1) {
        let a = if i == n { a.abs() / 2.0 } else { a.abs() };
        m = m.max((a / lead).powf(1.0 / i as f64));
    }
    2.0 * m
}

const PRIME: u64 = 2_305_843_009_213_693_951;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn invmod(a: u64) -> u64 {
    powmod(a, PRIME - 2)
}

fn reduce(c: &Q) -> Option<u64> {
    let m = BigInt::from(PRIME);
    let n = (c.numer() % &m + &m) % &m;
    let d = (c.denom() % &m + &m) % &m;
    let d = d.to_u64()?;
    (d != 0).then(|| mulmod(n.to_u64().expect("reduced"), invmod(d)))
}

/// Coefficients mod the prime, constant term first, when every coefficient
/// is a rational constant with invertible denominator and the leading one survives.
fn modular_image(p: &Poly<Q>, z: usize) -> Option<Vec<u64>> {
    let cs = p.coefficients_in(z);
    let out: Vec<u64> = cs.iter().map(|c| reduce(&c.constant_value()?)).collect::<Option<_>>()?;
    (*out.last()? != 0).then_some(out)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn modular_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = invmod(*b.last().expect("nonempty"));
        while a.len() >= b.len() {
            let f = mulmod(*a.last().expect("nonempty"), inv);
            let off = a.len() - b.len();
            for (i, &bi) in b.iter().enumerate() {
                a[off + i] = (a[off + i] + PRIME - mulmod(f, bi)) % PRIME;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// A coprime image modulo a prime proves `p` and `r` coprime over `ℚ`.
fn coprime_mod_prime(p: &Poly<Q>, r: &Poly<Q>, z: usize) -> bool {
    match (modular_image(p, z), modular_image(r, z)) {
        (Some(a), Some(b)) => modular_gcd_degree(a, b) == 0,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::parse::parse_expression;
    use crate::symcore::ring::Ring;

    fn setup() -> (Ring, impl Fn(&str) -> RatFunc<Q>) {
        let ring = Ring::new(&["z", "q", "h"]).unwrap();
        let r2 = ring.clone();
        (ring, move |s: &str| parse_expression(s, &r2).unwrap())
    }

    fn set(v: &[u32]) -> BTreeSet<u32> {
        v.iter().copied().collect()
    }

    #[test]
    fn dilation_root_ratio() {
        let (_, e) = setup();
        let a = OrbitAction::Dilation(e("q"));
        let d = dispersion_set(e("z - 1").num(), e("z - q^2").num(), 0, &a).unwrap();
        assert_eq!(d, set(&[2]));
    }

    #[test]
    fn translation_root_shift() {
        let (_, e) = setup();
        let a = OrbitAction::Translation(e("1"));
        let d = dispersion_set(e("z").num(), e("z - 3").num(), 0, &a).unwrap();
        assert_eq!(d, set(&[3]));
    }

    #[test]
    fn symbolic_q_separates_integers() {
        let (_, e) = setup();
        let a = OrbitAction::Dilation(e("q"));
        let d = dispersion_set(e("z - 1").num(), e("z - 5").num(), 0, &a).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn symbolic_step_and_zero_shift() {
        let (_, e) = setup();
        let a = OrbitAction::Translation(e("h"));
        let p = e("(z - 1)*(z + 2*h)").into_parts().0;
        let r = e("(z - 1 + h)*(z + h)").into_parts().0;
        // r(z + k h) has roots 1 - (k+1) h and -(k+1) h
        assert_eq!(dispersion_set(&p, &r, 0, &a).unwrap(), set(&[1]));
        assert_eq!(dispersion_set(&p, &p, 0, &a).unwrap(), set(&[0]));
    }

    #[test]
    fn rational_dilation_and_periodic_rejection() {
        let (_, e) = setup();
        let a = OrbitAction::Dilation(e("2"));
        let d = dispersion_set(e("z - 1").num(), e("(z - 8)*(z - 3)").num(), 0, &a).unwrap();
        assert_eq!(d, set(&[3]));
        let per = OrbitAction::Dilation(e("-1"));
        assert_eq!(dispersion_set(e("z").num(), e("z").num(), 0, &per), Err(SymError::Periodic));
        let bad = OrbitAction::Dilation(e("z"));
        assert_eq!(dispersion_set(e("z").num(), e("z").num(), 0, &bad), Err(SymError::NotNormalized));
    }

    #[test]
    fn root_bounds_enclose_roots() {
        let (_, e) = setup();
        let p = e("(z - 1/3)*(z + 40)*(z - 7)").into_parts().0;
        let (lo, hi) = root_bounds(&p, 0).unwrap();
        assert!(lo <= 1.0 / 3.0 && (40.0..200.0).contains(&hi));
    }

    #[test]
    fn modular_filter_agrees_with_gcd() {
        let (_, e) = setup();
        let p = e("(z - 1)*(2*z + 3)").into_parts().0;
        assert!(coprime_mod_prime(&p, e("z^2 + 5").num(), 0));
        assert!(!coprime_mod_prime(&p, e("(z - 1)*(z + 9)").num(), 0));
        assert!(!coprime_mod_prime(&p, e("q*z + 1").num(), 0));
    }
}
