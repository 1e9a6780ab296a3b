use num_bigint::BigInt;
use proptest::prelude::*;

use dvg_core::galois2::character::reduce_jointly;
use dvg_core::galois2::solver::residual;
use dvg_core::galois2::{classify_triangular, solve_first_order, AssumptionRegistry, TriangularForm};
use dvg_core::symcore::{OrbitAction, Ring};
use dvg_core::{Matrix, RatFunc, Rational};

fn ring() -> Ring {
    Ring::new(&["z"]).unwrap()
}

fn int(c: i64) -> RatFunc {
    RatFunc::constant(&ring(), Rational::from_integer(BigInt::from(c)))
}

fn z() -> RatFunc {
    RatFunc::var(&ring(), 0)
}

fn action() -> impl Strategy<Value = OrbitAction> {
    prop_oneof![Just(OrbitAction::Translation(int(1))), Just(OrbitAction::Dilation(int(2)))]
}

/// `c · Π (z + r_i)^{e_i}` with integer roots and small exponents.
fn product() -> impl Strategy<Value = RatFunc> {
    (prop_oneof![Just(1i64), Just(-1), Just(3)], prop::collection::vec((-4i64..=4, -2i64..=2), 0..3)).prop_map(|(c, fs)| {
        fs.into_iter().fold(int(c), |acc, (r, e)| &acc * &(&z() + &int(r)).pow(e).unwrap())
    })
}

/// Small rational function of `z`.
fn small() -> impl Strategy<Value = RatFunc> {
    (prop::collection::vec(-3i64..=3, 1..3), prop::collection::vec(-3i64..=3, 0..2)).prop_map(|(n, d)| {
        let poly = |cs: &[i64]| cs.iter().rev().fold(int(0), |acc, &c| &(&acc * &z()) + &int(c));
        let den = &(&poly(&d) * &z()) + &int(1);
        poly(&n).try_div(&den).unwrap_or_else(|_| poly(&n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn planted_solutions_are_recovered(act in action(), u in small(), a in product(), d in product()) {
        let reg = AssumptionRegistry::empty();
        let b = -&residual(&u, &a, &RatFunc::zero(&ring()), &d, 0, &act).unwrap();
        let sol = solve_first_order(&a, &b, &d, 0, &act, &reg, 8).unwrap();
        if let Some(p) = &sol.particular {
            prop_assert!(residual(p, &a, &b, &d, 0, &act).unwrap().is_zero());
        }
        if !sol.fallback_used {
            prop_assert!(sol.particular.is_some());
        }
        for h in &sol.homogeneous {
            prop_assert!(residual(h, &a, &RatFunc::zero(&ring()), &d, 0, &act).unwrap().is_zero());
        }
    }

    #[test]
    fn character_reduction_is_multiplicative(act in action(), r1 in product(), r2 in product()) {
        prop_assume!(!(&r1 * &r2).is_zero());
        let red = reduce_jointly(&[r1.clone(), r2.clone(), &r1 * &r2], 0, &act).unwrap();
        let [a, b, ab] = [&red.reductions[0], &red.reductions[1], &red.reductions[2]];
        let sum: Vec<i64> = a.exponents.iter().zip(&b.exponents).map(|(x, y)| x + y).collect();
        prop_assert_eq!(&ab.exponents, &sum);
        prop_assert_eq!(ab.z_exponent, a.z_exponent + b.z_exponent);
    }

    #[test]
    fn classification_is_gauge_invariant(act in action(), a in product(), d in product(), b in small(), p in product(), r in product(), s in small()) {
        let reg = AssumptionRegistry::empty();
        let zero = RatFunc::zero(&ring());
        let form = |a: RatFunc, b: RatFunc, d: RatFunc| TriangularForm {
            gauge: Matrix::identity(&ring(), 2),
            a, b, d,
            orientation: "upper".into(),
            method: "given".into(),
        };
        let shift = |x: &RatFunc| act.shift(x, 0, 1).unwrap();
        // (Pφ)^{-1} T P with P = [[p, s], [0, r]]
        let m = Matrix::from_rows(vec![vec![a.clone(), b.clone()], vec![zero.clone(), d.clone()]]).unwrap();
        let pm = Matrix::from_rows(vec![vec![p.clone(), s.clone()], vec![zero.clone(), r.clone()]]).unwrap();
        let pphi = pm.try_map(|e| act.shift(e, 0, 1)).unwrap();
        let t = pphi.inverse().unwrap().mul(&m).unwrap().mul(&pm).unwrap();
        prop_assert_eq!(t.get(0, 0), &(&(&a * &p) / &shift(&p)));
        let c1 = classify_triangular(&form(a, b, d), 0, &act, &reg, 6).unwrap();
        let c2 = classify_triangular(&form(t.get(0, 0).clone(), t.get(0, 1).clone(), t.get(1, 1).clone()), 0, &act, &reg, 6).unwrap();
        prop_assert_eq!(c1.lattice, c2.lattice);
        prop_assert_eq!(c1.lattice_upper, c2.lattice_upper);
        if c1.unipotent_dimension.is_some() && c2.unipotent_dimension.is_some() {
            prop_assert_eq!(c1.unipotent_dimension, c2.unipotent_dimension);
        }
    }
}
