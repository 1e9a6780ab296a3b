//! Rational maps, Jacobians, the canonical symplectic structure and
//! first-integral checks.
//!
//! Phase variables are ordered positions first, momenta second, and
//! `J = [[0, I], [-I, 0]]`. With this choice `{x_i, x_{n+i}} = 1` and
//! `X_H = J ∇H`.

use crate::symcore::{parse_expression, Ring};
use crate::{Error, Matrix, RatFunc, Result};

/// Canonical symplectic structure on a `2n`-dimensional chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticStructure {
    n: usize,
}

impl SymplecticStructure {
    pub fn new(n: usize) -> SymplecticStructure {
        SymplecticStructure { n }
    }

    pub fn for_dimension(dim: usize) -> Result<SymplecticStructure> {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::Dimension(format!("symplectic structure needs even dimension, got {}", dim)));
        }
        Ok(SymplecticStructure { n: dim / 2 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn matrix(&self, ring: &Ring) -> Matrix {
        let n = self.n;
        let mut j = Matrix::zeros(ring, 2 * n, 2 * n);
        for i in 0..n {
            j.set(i, n + i, RatFunc::one(ring));
            j.set(n + i, i, -RatFunc::one(ring));
        }
        j
    }

    fn check(&self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            return Err(Error::Dimension(format!("{} variables for a structure of dimension {}", dim, self.dim())));
        }
        Ok(())
    }
}

/// A rational map `V ⇢ V` on one affine chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMap {
    ring: Ring,
    vars: Vec<usize>,
    components: Vec<RatFunc>,
    symplectic_claimed: bool,
}

impl RationalMap {
    pub fn new(ring: &Ring, vars: Vec<usize>, components: Vec<RatFunc>, symplectic_claimed: bool) -> Result<RationalMap> {
        if vars.len() != components.len() {
            return Err(Error::Dimension(format!("{} variables but {} components", vars.len(), components.len())));
        }
        if vars.is_empty() {
            return Err(Error::Dimension("a map needs at least one variable".into()));
        }
        let mut sorted = vars.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != vars.len() || sorted.iter().any(|&v| v >= ring.len()) {
            return Err(Error::Dimension("map variables must be distinct symbols of the ring".into()));
        }
        if symplectic_claimed && !vars.len().is_multiple_of(2) {
            return Err(Error::Dimension("a symplectic map needs an even number of variables".into()));
        }
        Ok(RationalMap { ring: ring.clone(), vars, components, symplectic_claimed })
    }

    /// Build from variable names and expression strings.
    pub fn parse(ring: &Ring, vars: &[&str], components: &[&str], symplectic_claimed: bool) -> Result<RationalMap> {
        let idx = vars.iter().map(|v| ring.require(v)).collect::<std::result::Result<Vec<_>, _>>()?;
        let comps = components
            .iter()
            .map(|c| parse_expression(c, ring))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        RationalMap::new(ring, idx, comps, symplectic_claimed)
    }

    pub fn identity(ring: &Ring, vars: Vec<usize>) -> Result<RationalMap> {
        let comps = vars.iter().map(|&v| RatFunc::var(ring, v)).collect();
        RationalMap::new(ring, vars, comps, false)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.components
    }

    pub fn symplectic_claimed(&self) -> bool {
        self.symplectic_claimed
    }

    /// Bindings `x_i -> values[i]` over the map variables.
    pub fn bindings(&self, values: &[RatFunc]) -> Vec<Option<RatFunc>> {
        let mut b = vec![None; self.ring.len()];
        for (&v, r) in self.vars.iter().zip(values) {
            b[v] = Some(r.clone());
        }
        b
    }

    /// `h ∘ f`.
    pub fn pull_back(&self, h: &RatFunc) -> Result<RatFunc> {
        Ok(h.substitute(&self.bindings(&self.components))?)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &RationalMap) -> Result<RationalMap> {
        if g.vars != self.vars {
            return Err(Error::Dimension("composed maps must share their variables".into()));
        }
        let b = g.bindings(&g.components);
        let comps = self.components.iter().map(|c| c.substitute(&b)).collect::<std::result::Result<Vec<_>, _>>()?;
        RationalMap::new(&self.ring, self.vars.clone(), comps, self.symplectic_claimed && g.symplectic_claimed)
    }

    /// Entry `(i, j)` is `∂f_i/∂x_j`.
    pub fn jacobian(&self) -> Matrix {
        let rows = self
            .components
            .iter()
            .map(|c| self.vars.iter().map(|&v| c.differentiate(v)).collect())
            .collect();
        Matrix::from_rows(rows).expect("square by construction")
    }

    /// The map is dominant when its Jacobian determinant is not identically zero.
    pub fn is_dominant(&self) -> bool {
        self.jacobian().det().map(|d| !d.is_zero()).unwrap_or(false)
    }
}

/// `(Df)ᵀ J (Df) = J`.
pub fn is_symplectic(f: &RationalMap, s: &SymplecticStructure) -> Result<bool> {
    s.check(f.dim())?;
    let df = f.jacobian();
    let j = s.matrix(f.ring());
    Ok(df.transpose().mul(&j)?.mul(&df)? == j)
}

/// `{h1, h2} = ∇h1ᵀ J ∇h2`, over the phase variables `vars`.
pub fn poisson_bracket(h1: &RatFunc, h2: &RatFunc, vars: &[usize], s: &SymplecticStructure) -> Result<RatFunc> {
    s.check(vars.len())?;
    let n = s.n();
    let mut acc = RatFunc::zero(h1.ring());
    for i in 0..n {
        let (x, p) = (vars[i], vars[n + i]);
        let a = &h1.differentiate(x) * &h2.differentiate(p);
        let b = &h1.differentiate(p) * &h2.differentiate(x);
        acc = &acc + &(&a - &b);
    }
    Ok(acc)
}

/// `X_H = J ∇H`, so that `dF(X_H) = {F, H}`.
pub fn symplectic_gradient(h: &RatFunc, vars: &[usize], s: &SymplecticStructure) -> Result<Vec<RatFunc>> {
    s.check(vars.len())?;
    let n = s.n();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        out.push(h.differentiate(vars[n + i]));
    }
    for i in 0..n {
        out.push(-h.differentiate(vars[i]));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FirstIntegralCheck {
    pub holds: bool,
    /// The function is constant on the phase space.
    pub trivial: bool,
}

/// `H ∘ f = H`.
pub fn is_first_integral(h: &RatFunc, f: &RationalMap) -> Result<FirstIntegralCheck> {
    let trivial = f.vars().iter().all(|&v| !h.involves(v));
    let holds = trivial || f.pull_back(h)? == *h;
    Ok(FirstIntegralCheck { holds, trivial })
}

/// Rank of the Jacobian `[∂h_i/∂x_j]` over the fraction field.
pub fn functional_rank(hs: &[RatFunc], vars: &[usize]) -> usize {
    if hs.is_empty() || vars.is_empty() {
        return 0;
    }
    let rows = hs.iter().map(|h| vars.iter().map(|&v| h.differentiate(v)).collect()).collect();
    Matrix::from_rows(rows).expect("rectangular").rank()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropicReport {
    pub first_integrals: Vec<FirstIntegralCheck>,
    pub rank: usize,
    pub expected_rank: usize,
    /// Pairs `(i, j)` with `{H_i, H_j} != 0`, `j` among the isotropic generators.
    pub bracket_failures: Vec<(usize, usize)>,
}

impl IsotropicReport {
    pub fn first_integrals_ok(&self) -> bool {
        self.first_integrals.iter().all(|c| c.holds)
    }

    pub fn rank_ok(&self) -> bool {
        self.rank == self.expected_rank
    }

    pub fn brackets_ok(&self) -> bool {
        self.bracket_failures.is_empty()
    }

    pub fn verdict(&self) -> bool {
        self.first_integrals_ok() && self.rank_ok() && self.brackets_ok()
    }
}

/// Check `n + ell` first integrals whose first `n - ell` entries are the
/// isotropic generators.
pub fn check_isotropic_integrability(
    f: &RationalMap,
    hs: &[RatFunc],
    ell: usize,
    s: &SymplecticStructure,
) -> Result<IsotropicReport> {
    s.check(f.dim())?;
    let n = s.n();
    if ell > n {
        return Err(Error::BadEll { ell, n });
    }
    if hs.len() != n + ell {
        return Err(Error::Dimension(format!("expected {} functions, got {}", n + ell, hs.len())));
    }
    let first_integrals = hs.iter().map(|h| is_first_integral(h, f)).collect::<Result<Vec<_>>>()?;
    let rank = functional_rank(hs, f.vars());
    let mut bracket_failures = Vec::new();
    for (i, hi) in hs.iter().enumerate() {
        for (j, hj) in hs.iter().enumerate().take(n - ell) {
            if i != j && !poisson_bracket(hi, hj, f.vars(), s)?.is_zero() {
                bracket_failures.push((i, j));
            }
        }
    }
    Ok(IsotropicReport { first_integrals, rank, expected_rank: n + ell, bracket_failures })
}
