use crate::symcore::{ratfunc_sqrt, OrbitAction, Ring};
use crate::{Error, Matrix, RatFunc, Rational, Result};

pub const DEFAULT_PERIOD_BOUND: u32 = 12;

/// `z -> (a z + b) / (c z + d)` with coefficients free of `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Moebius {
    z: usize,
    a: RatFunc,
    b: RatFunc,
    c: RatFunc,
    d: RatFunc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoebiusKind {
    Identity,
    Translation(RatFunc),
    Dilation(RatFunc),
    /// Fixed points not rational over the coefficient field.
    General,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedPoint {
    Finite(RatFunc),
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoebiusClass {
    pub kind: MoebiusKind,
    pub fixed_points: Vec<FixedPoint>,
    /// `w = N(z)` conjugating `φ` to the normal form `ψ`: `N ∘ φ = ψ ∘ N`.
    pub normalizer: Option<Moebius>,
    /// Smallest `k` with `φ^k = id`, searched up to the bound.
    pub period: Option<u32>,
}

impl MoebiusClass {
    pub fn is_periodic(&self) -> bool {
        self.period.is_some()
    }

    /// The normal form as an orbit action, when there is one.
    pub fn action(&self) -> Option<OrbitAction> {
        match &self.kind {
            MoebiusKind::Translation(h) => Some(OrbitAction::Translation(h.clone())),
            MoebiusKind::Dilation(q) => Some(OrbitAction::Dilation(q.clone())),
            _ => None,
        }
    }
}

impl Moebius {
    pub fn new(z: usize, a: RatFunc, b: RatFunc, c: RatFunc, d: RatFunc) -> Result<Moebius> {
        if [&a, &b, &c, &d].iter().any(|x| x.involves(z)) {
            return Err(Error::Degenerate("Moebius coefficients must not involve the curve variable".into()));
        }
        let m = Moebius { z, a, b, c, d };
        if m.det().is_zero() {
            return Err(Error::Degenerate("Moebius transformation with ad - bc = 0".into()));
        }
        Ok(m)
    }

    pub fn identity(ring: &Ring, z: usize) -> Moebius {
        let (o, l) = (RatFunc::zero(ring), RatFunc::one(ring));
        Moebius { z, a: l.clone(), b: o.clone(), c: o, d: l }
    }

    pub fn translation(z: usize, h: RatFunc) -> Result<Moebius> {
        let ring = h.ring().clone();
        Moebius::new(z, RatFunc::one(&ring), h, RatFunc::zero(&ring), RatFunc::one(&ring))
    }

    pub fn dilation(z: usize, q: RatFunc) -> Result<Moebius> {
        let ring = q.ring().clone();
        Moebius::new(z, q, RatFunc::zero(&ring), RatFunc::zero(&ring), RatFunc::one(&ring))
    }

    /// Read a Moebius transformation off an expression in `z`.
    pub fn from_ratfunc(r: &RatFunc, z: usize) -> Result<Moebius> {
        let (n, d) = (r.num().coefficients_in(z), r.den().coefficients_in(z));
        if n.len() > 2 || d.len() > 2 {
            return Err(Error::Degenerate(format!("`{}` is not a Moebius transformation", r)));
        }
        let ring = r.ring();
        let get = |v: &[crate::Poly], i: usize| v.get(i).map(|p| RatFunc::from_poly(p.clone())).unwrap_or_else(|| RatFunc::zero(ring));
        Moebius::new(z, get(&n, 1), get(&n, 0), get(&d, 1), get(&d, 0))
    }

    pub fn z(&self) -> usize {
        self.z
    }

    pub fn ring(&self) -> &Ring {
        self.a.ring()
    }

    pub fn coefficients(&self) -> [&RatFunc; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> RatFunc {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    /// `φ(z)` as a rational function.
    pub fn as_ratfunc(&self) -> RatFunc {
        let zv = RatFunc::var(self.ring(), self.z);
        let num = &(&self.a * &zv) + &self.b;
        let den = &(&self.c * &zv) + &self.d;
        num.try_div(&den).expect("nonzero denominator")
    }

    /// `r(φ(z))`.
    pub fn apply(&self, r: &RatFunc) -> Result<RatFunc> {
        let mut b = vec![None; self.ring().len()];
        b[self.z] = Some(self.as_ratfunc());
        Ok(r.substitute(&b)?)
    }

    pub fn apply_matrix(&self, m: &Matrix) -> Result<Matrix> {
        m.try_map(|e| self.apply(e))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Moebius) -> Moebius {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&other.a, &other.b, &other.c, &other.d);
        Moebius {
            z: self.z,
            a: &(a * e) + &(b * g),
            b: &(a * f) + &(b * h),
            c: &(c * e) + &(d * g),
            d: &(c * f) + &(d * h),
        }
    }

    pub fn inverse(&self) -> Moebius {
        Moebius { z: self.z, a: self.d.clone(), b: -self.b.clone(), c: -self.c.clone(), d: self.a.clone() }
    }

    pub fn power(&self, k: i64) -> Moebius {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Moebius::identity(self.ring(), self.z);
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// True when the coefficient matrix is a scalar multiple of the identity.
    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    pub fn period(&self, bound: u32) -> Option<u32> {
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_identity() {
                return Some(k);
            }
            acc = acc.compose(self);
        }
        None
    }

    pub fn classify(&self, bound: u32) -> MoebiusClass {
        let period = self.period(bound);
        let ring = self.ring().clone();
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let id = Moebius::identity(&ring, self.z);
        if self.is_identity() {
            return MoebiusClass { kind: MoebiusKind::Identity, fixed_points: Vec::new(), normalizer: Some(id), period };
        }
        if c.is_zero() {
            if a == d {
                let h = b.try_div(d).expect("d != 0");
                return MoebiusClass {
                    kind: MoebiusKind::Translation(h),
                    fixed_points: vec![FixedPoint::Infinity],
                    normalizer: Some(id),
                    period,
                };
            }
            let z0 = b.try_div(&(d - a)).expect("a != d");
            let q = a.try_div(d).expect("d != 0");
            let n = Moebius { z: self.z, a: RatFunc::one(&ring), b: -z0.clone(), c: RatFunc::zero(&ring), d: RatFunc::one(&ring) };
            return MoebiusClass {
                kind: MoebiusKind::Dilation(q),
                fixed_points: vec![FixedPoint::Finite(z0), FixedPoint::Infinity],
                normalizer: Some(n),
                period,
            };
        }
        // fixed points solve c z^2 + (d - a) z - b = 0
        let dma = d - a;
        let disc = &(&dma * &dma) + (&(b * c).scale(&Rational::from_integer(4.into())));
        let two_c = c.scale(&Rational::from_integer(2.into()));
        let general = MoebiusClass { kind: MoebiusKind::General, fixed_points: Vec::new(), normalizer: None, period };
        if disc.is_zero() {
            let z0 = (a - d).try_div(&two_c).expect("c != 0");
            let n = Moebius { z: self.z, a: RatFunc::zero(&ring), b: RatFunc::one(&ring), c: RatFunc::one(&ring), d: -z0.clone() };
            let w = n.as_ratfunc();
            let h = &self.apply(&w).expect("regular") - &w;
            if h.involves(self.z) {
                return general;
            }
            return MoebiusClass {
                kind: MoebiusKind::Translation(h),
                fixed_points: vec![FixedPoint::Finite(z0)],
                normalizer: Some(n),
                period,
            };
        }
        let Some(s) = ratfunc_sqrt(&disc) else { return general };
        let z1 = (&(a - d) + &s).try_div(&two_c).expect("c != 0");
        let z2 = (&(a - d) - &s).try_div(&two_c).expect("c != 0");
        let n = Moebius { z: self.z, a: RatFunc::one(&ring), b: -z1.clone(), c: RatFunc::one(&ring), d: -z2.clone() };
        let w = n.as_ratfunc();
        let Ok(q) = self.apply(&w).and_then(|x| Ok(x.try_div(&w)?)) else { return general };
        if q.involves(self.z) {
            return general;
        }
        MoebiusClass {
            kind: MoebiusKind::Dilation(q),
            fixed_points: vec![FixedPoint::Finite(z1), FixedPoint::Finite(z2)],
            normalizer: Some(n),
            period,
        }
    }
}

impl std::fmt::Display for Moebius {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_ratfunc())
    }
}
