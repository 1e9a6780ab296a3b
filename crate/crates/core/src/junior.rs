//! Generic valuations and junior parts along an adapted curve, and the
//! Ziglin recombination that restores independence of junior parts.
//!
//! The jet of `H` along `ι` is `H(ι(z) + ε Y)`. For a polynomial `F` its
//! lowest nonvanishing ε-coefficient is the junior part and the order is the
//! valuation; a quotient `F/G` gets `F°/G°` and `ν(F) - ν(G)`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynsys::functional_rank;
use crate::varcurve::{AdaptedCurve, DifferenceSystem};
use crate::{Error, Poly, RatFunc, Rational, Result};

/// Where junior parts live: phase variables, the curve, fiber variables
/// `Y_i` paired with the phase variables, and the jet parameter `ε`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetFrame {
    vars: Vec<usize>,
    curve: AdaptedCurve,
    ys: Vec<usize>,
    eps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JuniorPart {
    pub valuation: i64,
    pub expr: RatFunc,
}

impl JetFrame {
    pub fn new(vars: Vec<usize>, curve: AdaptedCurve, ys: Vec<usize>, eps: usize) -> Result<JetFrame> {
        if vars.len() != curve.dim() || ys.len() != vars.len() {
            return Err(Error::Dimension("phase, curve and fiber dimensions differ".into()));
        }
        Ok(JetFrame { vars, curve, ys, eps })
    }

    pub fn curve(&self) -> &AdaptedCurve {
        &self.curve
    }

    pub fn ys(&self) -> &[usize] {
        &self.ys
    }

    /// Variables of junior parts: the curve variable then the fibers.
    pub fn fiber_coordinates(&self) -> Vec<usize> {
        std::iter::once(self.curve.z()).chain(self.ys.iter().copied()).collect()
    }

    fn jet(&self, p: &Poly) -> Result<(i64, RatFunc)> {
        if p.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let ring = p.ring();
        let eps = RatFunc::var(ring, self.eps);
        let mut b = vec![None; ring.len()];
        for ((&x, &y), c) in self.vars.iter().zip(&self.ys).zip(self.curve.components()) {
            b[x] = Some(c + &(&eps * &RatFunc::var(ring, y)));
        }
        let (num, den) = RatFunc::from_poly(p.clone()).substitute(&b)?.into_parts();
        let coeffs = num.coefficients_in(self.eps);
        let k = coeffs.iter().position(|c| !c.is_zero()).ok_or(Error::ZeroFunction)?;
        let part = RatFunc::new(coeffs[k].clone(), den)?;
        Ok((k as i64, part))
    }

    pub fn generic_valuation(&self, h: &RatFunc) -> Result<i64> {
        Ok(self.junior_part(h)?.valuation)
    }

    pub fn junior_part(&self, h: &RatFunc) -> Result<JuniorPart> {
        if h.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let (vn, jn) = self.jet(h.num())?;
        let (vd, jd) = self.jet(h.den())?;
        Ok(JuniorPart { valuation: vn - vd, expr: jn.try_div(&jd)? })
    }
}

/// `h(φ z, A(z) Y) = h(z, Y)`.
pub fn verify_difference_first_integral(h: &RatFunc, s: &DifferenceSystem, ys: &[usize]) -> Result<bool> {
    if ys.len() != s.rank() {
        return Err(Error::Dimension("fiber variables do not match the system rank".into()));
    }
    let ring = h.ring();
    let mut b = vec![None; ring.len()];
    b[s.z()] = Some(s.phi().as_ratfunc());
    for (i, &yi) in ys.iter().enumerate() {
        let mut acc = RatFunc::zero(ring);
        for (j, &yj) in ys.iter().enumerate() {
            acc = &acc + &(s.matrix().get(i, j) * &RatFunc::var(ring, yj));
        }
        b[yi] = Some(acc);
    }
    Ok(h.substitute(&b)? == *h)
}

pub fn junior_independence_rank(js: &[JuniorPart], frame: &JetFrame) -> usize {
    let exprs: Vec<RatFunc> = js.iter().map(|j| j.expr.clone()).collect();
    functional_rank(&exprs, &frame.fiber_coordinates())
}

/// A polynomial in the input functions `F1, ..., Fk`, as `(coefficient, exponents)` terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combination {
    pub terms: Vec<(Rational, Vec<u32>)>,
}

impl Combination {
    fn single(k: usize, i: usize) -> Combination {
        let mut e = vec![0; k];
        e[i] = 1;
        Combination { terms: vec![(Rational::from_integer(1.into()), e)] }
    }

    pub fn is_identity_on(&self, i: usize) -> bool {
        self.terms.len() == 1 && self.terms[0].1.iter().enumerate().all(|(j, &e)| e == u32::from(i == j))
    }

    pub fn evaluate(&self, fs: &[RatFunc]) -> Result<RatFunc> {
        let ring = fs[0].ring();
        let mut acc = RatFunc::zero(ring);
        for (c, e) in &self.terms {
            let mut t = RatFunc::constant(ring, c.clone());
            for (f, &k) in fs.iter().zip(e) {
                if k > 0 {
                    t = &t * &f.pow(k as i64)?;
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use num_traits::{One, Signed};
        for (n, (c, e)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { format!("F{}", j + 1) } else { format!("F{}^{}", j + 1, k) })
                .collect();
            let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
            let a = c.abs();
            let body = if a.is_one() { mono } else { format!("{}*{}", a, mono) };
            match (n, c.is_negative()) {
                (0, false) => write!(f, "{}", body)?,
                (0, true) => write!(f, "-1*{}", body)?,
                (_, false) => write!(f, " + {}", body)?,
                (_, true) => write!(f, " - {}", body)?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZiglinResult {
    pub combinations: Vec<Combination>,
    pub functions: Vec<RatFunc>,
    pub juniors: Vec<JuniorPart>,
    pub rank: usize,
    /// Number of candidate combinations examined.
    pub tried: usize,
}

const DENSE_TRIALS: usize = 64;

/// Search `G_i = P_i(F_1, ..., F_k)` of total degree at most `budget` whose
/// junior parts are independent. Triangular corrections
/// `F_i + Σ_{j<i} c_j F_j^e` come first, then dense random polynomials.
pub fn ziglin_combination(fs: &[RatFunc], frame: &JetFrame, budget: u32, seed: u64) -> Result<ZiglinResult> {
    let k = fs.len();
    if k == 0 {
        return Err(Error::Dimension("no functions to combine".into()));
    }
    if functional_rank(fs, &frame.vars) != k {
        return Err(Error::Degenerate("input functions are functionally dependent".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut combinations = Vec::with_capacity(k);
    let mut functions = Vec::with_capacity(k);
    let mut juniors: Vec<JuniorPart> = Vec::with_capacity(k);
    let mut tried = 0;
    for i in 0..k {
        let mut found = None;
        for cand in candidates(k, i, budget, &mut rng) {
            tried += 1;
            let g = cand.evaluate(fs)?;
            if g.is_zero() {
                continue;
            }
            let j = frame.junior_part(&g)?;
            let mut trial = juniors.clone();
            trial.push(j.clone());
            if junior_independence_rank(&trial, frame) == i + 1 {
                found = Some((cand, g, j));
                break;
            }
        }
        let Some((c, g, j)) = found else {
            return Err(Error::BudgetExhausted(format!(
                "no combination of total degree <= {} gives F{} a junior part independent of the previous ones ({} candidates tried)",
                budget,
                i + 1,
                tried
            )));
        };
        combinations.push(c);
        functions.push(g);
        juniors.push(j);
    }
    Ok(ZiglinResult { combinations, functions, juniors, rank: k, tried })
}

fn candidates(k: usize, i: usize, budget: u32, rng: &mut ChaCha8Rng) -> Vec<Combination> {
    let mut out = vec![Combination::single(k, i)];
    if i == 0 || budget == 0 {
        return out;
    }
    let mut vectors: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..i {
        vectors = vectors.into_iter().flat_map(|v| (-2..=2).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    vectors.retain(|v| v.iter().any(|&c| c != 0));
    for e in 1..=budget {
        let mut vs = vectors.clone();
        vs.shuffle(rng);
        for v in vs {
            let mut comb = Combination::single(k, i);
            for (j, &c) in v.iter().enumerate() {
                if c != 0 {
                    let mut ex = vec![0; k];
                    ex[j] = e;
                    comb.terms.push((Rational::from_integer(c.into()), ex));
                }
            }
            out.push(comb);
        }
    }
    let monomials = monomials_below(i, budget);
    for _ in 0..DENSE_TRIALS {
        let mut comb = Combination::single(k, i);
        for m in &monomials {
            let c: i64 = rng.gen_range(-2..=2);
            if c != 0 {
                let mut ex = m.clone();
                ex.resize(k, 0);
                comb.terms.push((Rational::from_integer(c.into()), ex));
            }
        }
        if comb.terms.len() > 1 {
            out.push(comb);
        }
    }
    out
}

/// Exponent vectors in the first `n` functions with total degree in `1..=budget`.
fn monomials_below(n: usize, budget: u32) -> Vec<Vec<u32>> {
    let mut all: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..n {
        all = all
            .into_iter()
            .flat_map(|v| {
                let used: u32 = v.iter().sum();
                (0..=budget - used).map(move |e| [v.clone(), vec![e]].concat())
            })
            .collect();
    }
    all.retain(|v| v.iter().sum::<u32>() > 0);
    all
}
