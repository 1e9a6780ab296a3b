//! Orbit reduction of polynomial blocks under a translation or dilation.

use super::multiplicative::poly_coprime_basis;
use crate::symcore::gcd::squarefree_in;
use crate::symcore::{dispersion_set, gcd, OrbitAction};
use crate::{Error, Poly, RatFunc, Result};

/// A block `b = λ · ρ(φ^shift z)` with `ρ` the representative of its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub block: Poly,
    pub class: usize,
    pub shift: i64,
    pub lambda: RatFunc,
}

/// Squarefree, pairwise coprime blocks grouped into orbit classes; roots of
/// one representative are pairwise orbit-distinct and roots of different
/// representatives lie in different orbits.
#[derive(Debug, Clone)]
pub struct OrbitData {
    pub reps: Vec<Poly>,
    pub members: Vec<Member>,
}

fn deg(p: &Poly, z: usize) -> u32 {
    p.degree_in(z).unwrap_or(0)
}

fn strip_z(p: &Poly, z: usize) -> Poly {
    let m = p.min_degree_in(z).unwrap_or(0);
    if m == 0 {
        p.clone()
    } else {
        p.exact_div(&Poly::var(p.ring(), z).pow(m)).expect("power of z divides")
    }
}

/// Blocks from the given polynomials. Under a dilation the factor `z` is left
/// out; it is fixed by the action and tracked separately.
pub fn orbit_classes(polys: &[Poly], z: usize, action: &OrbitAction) -> Result<OrbitData> {
    let mut blocks: Vec<Poly> = Vec::new();
    for p in polys {
        if p.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let p = if action.is_dilation() { strip_z(p, z) } else { p.clone() };
        for (f, _) in squarefree_in(&p, z) {
            blocks.push(f);
        }
    }
    let mut blocks = poly_coprime_basis(blocks);
    blocks.retain(|b| deg(b, z) > 0);
    // Split until every shift relation between blocks is a full equality.
    'refine: loop {
        // dispersions are nonnegative, so both orders of each pair are needed
        for i in 0..blocks.len() {
            for j in 0..blocks.len() {
                for k in dispersion_set(&blocks[i], &blocks[j], z, action)? {
                    if i == j && k == 0 {
                        continue;
                    }
                    let shifted = action.shift_poly(&blocks[j], z, k as i64)?;
                    let g = gcd(&blocks[i], &shifted);
                    let back = action.shift_poly(&g, z, -(k as i64))?;
                    let full_i = deg(&g, z) == deg(&blocks[i], z);
                    let full_j = deg(&back, z) == deg(&blocks[j], z);
                    if i != j && full_i && full_j {
                        continue;
                    }
                    let mut next: Vec<Poly> = Vec::new();
                    for (idx, b) in blocks.iter().enumerate() {
                        if idx != i && idx != j {
                            next.push(b.clone());
                        }
                    }
                    next.push(g.clone());
                    next.push(blocks[i].exact_div(&g).expect("gcd divides"));
                    if i != j {
                        next.push(back.clone());
                        next.push(blocks[j].exact_div(&back).expect("shifted gcd divides"));
                    }
                    blocks = poly_coprime_basis(next);
                    blocks.retain(|b| deg(b, z) > 0);
                    continue 'refine;
                }
            }
        }
        break;
    }
    // Weighted union-find: parent and shift relative to the parent.
    let n = blocks.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut offset: Vec<i64> = vec![0; n];
    fn find(parent: &mut [usize], offset: &mut [i64], i: usize) -> (usize, i64) {
        if parent[i] == i {
            return (i, 0);
        }
        let (r, o) = find(parent, offset, parent[i]);
        parent[i] = r;
        offset[i] += o;
        (r, offset[i])
    }
    for i in 0..n {
        for j in i + 1..n {
            for (a, b) in [(i, j), (j, i)] {
                for k in dispersion_set(&blocks[a], &blocks[b], z, action)? {
                    // blocks[a] ~ blocks[b](φ^k z): shift(a) = shift(b) + k
                    let (ra, oa) = find(&mut parent, &mut offset, a);
                    let (rb, ob) = find(&mut parent, &mut offset, b);
                    if ra == rb {
                        if oa != ob + k as i64 {
                            return Err(Error::Degenerate("inconsistent orbit shifts".into()));
                        }
                    } else {
                        parent[ra] = rb;
                        offset[ra] = ob + k as i64 - oa;
                    }
                }
            }
        }
    }
    let roots: Vec<(usize, i64)> = (0..n).map(|i| find(&mut parent, &mut offset, i)).collect();
    // representative of a class: its first block, at shift 0
    let mut reps: Vec<Poly> = Vec::new();
    let mut rep_index: Vec<Option<usize>> = vec![None; n];
    let mut rep_offset: Vec<i64> = Vec::new();
    for i in 0..n {
        let (r, o) = roots[i];
        if rep_index[r].is_none() {
            rep_index[r] = Some(reps.len());
            reps.push(blocks[i].clone());
            rep_offset.push(o);
        }
    }
    let mut members: Vec<Member> = Vec::new();
    for i in 0..n {
        let (r, o) = roots[i];
        let class = rep_index[r].unwrap();
        let shift = o - rep_offset[class];
        let image = action.shift(&RatFunc::from_poly(reps[class].clone()), z, shift)?;
        let lambda = &RatFunc::from_poly(blocks[i].clone()) / &image;
        if lambda.involves(z) {
            return Err(Error::Degenerate("orbit-related blocks differ by a nonconstant factor".into()));
        }
        members.push(Member { block: blocks[i].clone(), class, shift, lambda });
    }
    Ok(OrbitData { reps, members })
}

/// `T` with `T(φz)/T(z) = ρ(φ^s z)/ρ(z)`.
pub fn telescoper(rho: &Poly, s: i64, z: usize, action: &OrbitAction) -> Result<RatFunc> {
    let rho = RatFunc::from_poly(rho.clone());
    let mut t = RatFunc::one(rho.ring());
    if s > 0 {
        for j in 0..s {
            t = &t * &action.shift(&rho, z, j)?;
        }
    } else {
        for j in s..0 {
            t = &t / &action.shift(&rho, z, j)?;
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{parse_expression, Ring};

    fn p(r: &Ring, s: &str) -> Poly {
        parse_expression::<crate::Rational>(s, r).unwrap().into_parts().0
    }

    #[test]
    fn translation_orbits() {
        let r = Ring::new(&["z", "h"]).unwrap();
        let act = OrbitAction::Translation(parse_expression("1", &r).unwrap());
        let d = orbit_classes(&[p(&r, "z*(z+3)"), p(&r, "z-1/2")], 0, &act).unwrap();
        assert_eq!(d.reps.len(), 2);
        let mut sizes: Vec<usize> = (0..2).map(|c| d.members.iter().filter(|m| m.class == c).count()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2]);
        for m in &d.members {
            let img = act.shift(&RatFunc::from_poly(d.reps[m.class].clone()), 0, m.shift).unwrap();
            assert_eq!(&img * &m.lambda, RatFunc::from_poly(m.block.clone()));
        }
    }

    #[test]
    fn relations_against_the_pair_order_are_split() {
        let r = Ring::new(&["z"]).unwrap();
        let act = OrbitAction::Dilation(parse_expression("2", &r).unwrap());
        let d = orbit_classes(&[p(&r, "(z-3)*(z-1)"), p(&r, "z-1/2")], 0, &act).unwrap();
        assert_eq!(d.reps.len(), 2);
        assert_eq!(d.members.len(), 3);
    }

    #[test]
    fn self_orbit_blocks_are_split() {
        let r = Ring::new(&["z"]).unwrap();
        let act = OrbitAction::Translation(parse_expression("1", &r).unwrap());
        let d = orbit_classes(&[p(&r, "z*(z+2)")], 0, &act).unwrap();
        assert_eq!(d.members.len(), 2);
        assert_eq!(d.reps.len(), 1);
        let shifts: Vec<i64> = d.members.iter().map(|m| m.shift).collect();
        assert_eq!((shifts[0] - shifts[1]).abs(), 2);
    }

    #[test]
    fn dilation_ignores_z() {
        let r = Ring::new(&["z", "q"]).unwrap();
        let act = OrbitAction::Dilation(parse_expression("q", &r).unwrap());
        let d = orbit_classes(&[p(&r, "z^2*(q*z-1)"), p(&r, "z-1")], 0, &act).unwrap();
        assert_eq!(d.reps.len(), 1);
        assert_eq!(d.members.len(), 2);
    }

    #[test]
    fn telescoping_identity() {
        let r = Ring::new(&["z", "q"]).unwrap();
        let act = OrbitAction::Dilation(parse_expression("q", &r).unwrap());
        let rho = p(&r, "z-1");
        for s in [-2i64, -1, 0, 1, 3] {
            let t = telescoper(&rho, s, 0, &act).unwrap();
            let lhs = &act.shift(&t, 0, 1).unwrap() / &t;
            let rho_r = RatFunc::from_poly(rho.clone());
            let rhs = &act.shift(&rho_r, 0, s).unwrap() / &rho_r;
            assert_eq!(lhs, rhs);
        }
    }
}
