use crate::dynsys::{is_symplectic, RationalMap, SymplecticStructure};
use crate::symcore::{Ring, SymError};
use crate::{Error, Matrix, RatFunc, Result};

use super::moebius::{Moebius, MoebiusClass, DEFAULT_PERIOD_BOUND};

/// A rational parametrized curve `z -> ι(z)` in the phase space chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdaptedCurve {
    z: usize,
    components: Vec<RatFunc>,
}

impl AdaptedCurve {
    pub fn new(z: usize, components: Vec<RatFunc>) -> Result<AdaptedCurve> {
        if components.is_empty() {
            return Err(Error::Dimension("curve without components".into()));
        }
        if components.iter().all(|c| !c.involves(z)) {
            return Err(Error::Degenerate("every curve component is constant".into()));
        }
        Ok(AdaptedCurve { z, components })
    }

    pub fn z(&self) -> usize {
        self.z
    }

    pub fn ring(&self) -> &Ring {
        self.components[0].ring()
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// `h(ι(z))` for a function on the phase space of `f`.
    pub fn restrict(&self, f: &RationalMap, h: &RatFunc) -> Result<RatFunc> {
        h.substitute(&f.bindings(&self.components)).map_err(|e| polar(e, h))
    }
}

fn polar(e: SymError, what: impl std::fmt::Display) -> Error {
    match e {
        SymError::SubstitutionPole => Error::PolarCurve(what.to_string()),
        other => Error::Sym(other),
    }
}

/// The linear system `Y(φ z) = A(z) Y(z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceSystem {
    phi: Moebius,
    a: Matrix,
    symplectic: bool,
}

impl DifferenceSystem {
    pub fn new(phi: Moebius, a: Matrix, symplectic: bool) -> Result<DifferenceSystem> {
        if !a.is_square() || a.nrows() == 0 {
            return Err(Error::Dimension("system matrix must be square".into()));
        }
        if a.det()?.is_zero() {
            return Err(Error::Degenerate("system matrix is singular".into()));
        }
        Ok(DifferenceSystem { phi, a, symplectic })
    }

    pub fn phi(&self) -> &Moebius {
        &self.phi
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn symplectic(&self) -> bool {
        self.symplectic
    }

    pub fn rank(&self) -> usize {
        self.a.nrows()
    }

    pub fn z(&self) -> usize {
        self.phi.z()
    }

    pub fn ring(&self) -> &Ring {
        self.phi.ring()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adaptedness {
    pub holds: bool,
    pub phi: Option<Moebius>,
    pub inferred: bool,
    /// `f ∘ ι`.
    pub image: Vec<RatFunc>,
    /// Components where `f ∘ ι` and `ι ∘ φ` differ.
    pub mismatched: Vec<usize>,
    pub class: Option<MoebiusClass>,
}

/// Check `f ∘ ι = ι ∘ φ`; without `phi`, infer it from the first
/// nonconstant component of Moebius degree and verify it on the others.
pub fn verify_adapted(f: &RationalMap, curve: &AdaptedCurve, phi: Option<&Moebius>) -> Result<Adaptedness> {
    if f.dim() != curve.dim() {
        return Err(Error::Dimension(format!("map of dimension {} and curve of dimension {}", f.dim(), curve.dim())));
    }
    if curve.components().iter().any(|c| f.vars().iter().any(|&v| c.involves(v))) {
        return Err(Error::Degenerate("curve components must not involve phase variables".into()));
    }
    let image = f.components().iter().map(|c| curve.restrict(f, c)).collect::<Result<Vec<_>>>()?;
    let (phi, inferred) = match phi {
        Some(p) => (Some(p.clone()), false),
        None => (infer_phi(curve, &image), true),
    };
    let Some(phi) = phi else {
        return Ok(Adaptedness {
            holds: false,
            phi: None,
            inferred,
            image,
            mismatched: (0..curve.dim()).collect(),
            class: None,
        });
    };
    let mut mismatched = Vec::new();
    for (i, (c, img)) in curve.components().iter().zip(&image).enumerate() {
        if phi.apply(c).map_err(|e| match e {
            Error::Sym(s) => polar(s, c),
            other => other,
        })? != *img
        {
            mismatched.push(i);
        }
    }
    let class = phi.classify(DEFAULT_PERIOD_BOUND);
    Ok(Adaptedness { holds: mismatched.is_empty(), phi: Some(phi), inferred, image, mismatched, class: Some(class) })
}

fn infer_phi(curve: &AdaptedCurve, image: &[RatFunc]) -> Option<Moebius> {
    let z = curve.z();
    let (c, img) = curve
        .components()
        .iter()
        .zip(image)
        .find(|(c, _)| c.involves(z) && Moebius::from_ratfunc(c, z).is_ok())?;
    let inv = Moebius::from_ratfunc(c, z).ok()?.inverse();
    let mut b = vec![None; c.ring().len()];
    b[z] = Some(img.clone());
    let phi = inv.as_ratfunc().substitute(&b).ok()?;
    Moebius::from_ratfunc(&phi, z).ok()
}

/// `A(z) = Df(ι(z))`, the discrete variational equation along the curve.
pub fn variational_system(f: &RationalMap, curve: &AdaptedCurve, phi: &Moebius) -> Result<DifferenceSystem> {
    let adapted = verify_adapted(f, curve, Some(phi))?;
    if !adapted.holds {
        return Err(Error::NotAdapted(format!("components {:?} differ", adapted.mismatched)));
    }
    let a = f.jacobian().try_map(|e| curve.restrict(f, e))?;
    let symplectic = f.dim().is_multiple_of(2) && is_symplectic(f, &SymplecticStructure::for_dimension(f.dim())?)?;
    DifferenceSystem::new(phi.clone(), a, symplectic)
}

/// `A(z)ᵀ J A(z) = J`.
pub fn verify_symplectic_system(s: &DifferenceSystem) -> Result<bool> {
    let j = SymplecticStructure::for_dimension(s.rank())?.matrix(s.ring());
    Ok(s.matrix().transpose().mul(&j)?.mul(s.matrix())? == j)
}

/// `A' = (P ∘ φ)^{-1} A P`.
pub fn gauge_transform(s: &DifferenceSystem, p: &Matrix) -> Result<DifferenceSystem> {
    if p.nrows() != s.rank() || p.ncols() != s.rank() {
        return Err(Error::Dimension("gauge matrix size".into()));
    }
    let p_phi = s.phi().apply_matrix(p)?;
    let inv = p_phi.inverse().map_err(|_| Error::Degenerate("singular gauge matrix".into()))?;
    let a = inv.mul(s.matrix())?.mul(p)?;
    let mut out = DifferenceSystem { phi: s.phi().clone(), a, symplectic: false };
    out.symplectic = s.rank().is_multiple_of(2) && verify_symplectic_system(&out)?;
    Ok(out)
}

/// Rewrite the system in the coordinate `w = N(z)` where `N` normalizes `φ`.
/// The curve variable keeps its symbol.
pub fn normalize_system(s: &DifferenceSystem) -> Result<(DifferenceSystem, MoebiusClass)> {
    let class = s.phi().classify(DEFAULT_PERIOD_BOUND);
    let n = class.normalizer.clone().ok_or_else(|| Error::Unsupported("Moebius transformation without rational fixed points".into()))?;
    let back = n.inverse();
    let a = back.apply_matrix(s.matrix())?;
    let phi = n.compose(s.phi()).compose(&back);
    let phi = Moebius::from_ratfunc(&phi.as_ratfunc(), s.z())?;
    Ok((DifferenceSystem { phi, a, symplectic: s.symplectic }, class))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::parse_expression;

    fn ring() -> Ring {
        Ring::new(&["x", "y", "z", "q", "qb", "t", "a0", "a1", "b0", "b1"]).unwrap()
    }

    fn e(s: &str) -> RatFunc {
        parse_expression(s, &ring()).unwrap()
    }

    fn mat(rows: &[&[&str]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| e(s)).collect()).collect()).unwrap()
    }

    fn curve(c: &[&str]) -> AdaptedCurve {
        AdaptedCurve::new(2, c.iter().map(|s| e(s)).collect()).unwrap()
    }

    fn ex1() -> RationalMap {
        RationalMap::parse(&ring(), &["x", "y"], &["q*x/(1 - y/(x-1))", "qb*y*(1 - y/(x-1))"], false).unwrap()
    }

    fn ex3() -> RationalMap {
        RationalMap::parse(&ring(), &["x", "y"], &["y*(a0 + a1*x) - x + 1", "x*y*(b0 + b1*y)"], false).unwrap()
    }

    #[test]
    fn example_one_system() {
        let phi = Moebius::dilation(2, e("q")).unwrap();
        let adapted = verify_adapted(&ex1(), &curve(&["z", "0"]), Some(&phi)).unwrap();
        assert!(adapted.holds && !adapted.inferred);
        let s = variational_system(&ex1(), &curve(&["z", "0"]), &phi).unwrap();
        assert_eq!(*s.matrix(), mat(&[&["q", "q*z/(z-1)"], &["0", "qb"]]));
    }

    #[test]
    fn example_three_inferred_periodic() {
        let adapted = verify_adapted(&ex3(), &curve(&["z", "0"]), None).unwrap();
        assert!(adapted.holds && adapted.inferred);
        assert_eq!(adapted.phi.as_ref().unwrap().as_ratfunc(), e("1 - z"));
        assert_eq!(adapted.class.as_ref().unwrap().period, Some(2));
        let s = variational_system(&ex3(), &curve(&["z", "0"]), adapted.phi.as_ref().unwrap()).unwrap();
        assert_eq!(*s.matrix(), mat(&[&["-1", "a0 + a1*z"], &["0", "z*b0"]]));
    }

    #[test]
    fn wrong_phi_is_rejected() {
        let phi = Moebius::translation(2, e("1")).unwrap();
        let adapted = verify_adapted(&ex1(), &curve(&["z", "0"]), Some(&phi)).unwrap();
        assert!(!adapted.holds);
        assert_eq!(adapted.mismatched, vec![0]);
        assert!(matches!(variational_system(&ex1(), &curve(&["z", "0"]), &phi), Err(Error::NotAdapted(_))));
    }

    #[test]
    fn polar_curve() {
        let f = RationalMap::parse(&ring(), &["x", "y"], &["x/y", "y"], false).unwrap();
        assert!(matches!(verify_adapted(&f, &curve(&["z", "0"]), None), Err(Error::PolarCurve(_))));
    }

    #[test]
    fn symplectic_systems() {
        let phi = Moebius::dilation(2, e("q")).unwrap();
        let sys = |m: Matrix| DifferenceSystem::new(phi.clone(), m, false).unwrap();
        assert!(verify_symplectic_system(&sys(mat(&[&["0", "1"], &["-1", "0"]]))).unwrap());
        assert!(!verify_symplectic_system(&sys(mat(&[&["2", "0"], &["0", "1"]]))).unwrap());
        assert!(verify_symplectic_system(&sys(mat(&[&["t", "0"], &["0", "1/t"]]))).unwrap());
    }

    #[test]
    fn gauge_composition_and_inverse() {
        let phi = Moebius::dilation(2, e("q")).unwrap();
        let s = DifferenceSystem::new(phi, mat(&[&["q", "z"], &["1", "qb"]]), false).unwrap();
        let p = mat(&[&["1", "z"], &["0", "1"]]);
        let q = mat(&[&["2", "0"], &["z", "1"]]);
        let two_step = gauge_transform(&gauge_transform(&s, &p).unwrap(), &q).unwrap();
        let one_step = gauge_transform(&s, &p.mul(&q).unwrap()).unwrap();
        assert_eq!(two_step.matrix(), one_step.matrix());
        let back = gauge_transform(&gauge_transform(&s, &p).unwrap(), &p.inverse().unwrap()).unwrap();
        assert_eq!(back.matrix(), s.matrix());
        let constant = DifferenceSystem::new(s.phi().clone(), mat(&[&["1", "2"], &["3", "4"]]), false).unwrap();
        let c = mat(&[&["1", "1"], &["0", "1"]]);
        let expected = c.inverse().unwrap().mul(constant.matrix()).unwrap().mul(&c).unwrap();
        assert_eq!(*gauge_transform(&constant, &c).unwrap().matrix(), expected);
    }

    #[test]
    fn normalization_moves_fixed_point() {
        let phi = Moebius::from_ratfunc(&e("1 - z"), 2).unwrap();
        let s = DifferenceSystem::new(phi, mat(&[&["z", "0"], &["0", "1"]]), false).unwrap();
        let (n, class) = normalize_system(&s).unwrap();
        assert_eq!(class.period, Some(2));
        assert_eq!(n.phi().as_ratfunc(), e("-1*z"));
        assert_eq!(*n.matrix(), mat(&[&["z + 1/2", "0"], &["0", "1"]]));
    }
}
