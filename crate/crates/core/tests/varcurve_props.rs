use num_bigint::BigInt;
use proptest::prelude::*;

use dvg_core::symcore::{Monomial, Ring};
use dvg_core::varcurve::{gauge_transform, DifferenceSystem, Moebius};
use dvg_core::{Matrix, Poly, RatFunc, Rational};

fn ring() -> Ring {
    Ring::new(&["z", "q"]).unwrap()
}

fn int(c: i64) -> Rational {
    Rational::from_integer(BigInt::from(c))
}

/// A polynomial in `z` and `q` of low degree.
fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-3i64..=3, 0u32..2, 0u32..2), 1..4).prop_map(|ts| {
        Poly::from_terms(&ring(), ts.into_iter().map(|(c, a, b)| (Monomial::from_exponents(vec![a, b]), int(c))))
    })
}

fn nonzero() -> impl Strategy<Value = RatFunc> {
    poly().prop_filter("nonzero", |p| !p.is_zero()).prop_map(RatFunc::from_poly)
}

fn moebius() -> impl Strategy<Value = Moebius> {
    (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3)
        .prop_filter("invertible", |(a, b, c, d)| a * d - b * c != 0)
        .prop_map(|(a, b, c, d)| {
            let k = |x: i64| RatFunc::constant(&ring(), int(x));
            Moebius::new(0, k(a), k(b), k(c), k(d)).unwrap()
        })
}

/// Triangular with nonzero diagonal, hence invertible.
fn gauge() -> impl Strategy<Value = Matrix> {
    (nonzero(), poly(), nonzero(), any::<bool>()).prop_map(|(p, s, r, lower)| {
        let zero = RatFunc::zero(&ring());
        let s = RatFunc::from_poly(s);
        let rows = if lower { vec![vec![p, zero], vec![s, r]] } else { vec![vec![p, s], vec![zero, r]] };
        Matrix::from_rows(rows).unwrap()
    })
}

fn system() -> impl Strategy<Value = DifferenceSystem> {
    (nonzero(), poly(), nonzero(), any::<bool>()).prop_map(|(a, b, d, dilation)| {
        let r = ring();
        let phi = if dilation {
            Moebius::dilation(0, RatFunc::var(&r, 1)).unwrap()
        } else {
            Moebius::translation(0, RatFunc::one(&r)).unwrap()
        };
        let m = Matrix::from_rows(vec![vec![a, RatFunc::from_poly(b)], vec![RatFunc::one(&r), d]]).unwrap();
        DifferenceSystem::new(phi, m, false).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn moebius_group_laws(m in moebius(), n in moebius(), r in nonzero()) {
        prop_assert!(m.compose(&m.inverse()).is_identity());
        prop_assert!(m.power(2).compose(&m.power(-1)) .compose(&m.inverse()).is_identity());
        // r((m∘n)(z)) = (r∘m)(n(z))
        prop_assert_eq!(m.compose(&n).apply(&r).unwrap(), n.apply(&m.apply(&r).unwrap()).unwrap());
    }

    #[test]
    fn gauge_transforms_compose(s in system(), p in gauge(), q in gauge()) {
        let twice = gauge_transform(&gauge_transform(&s, &p).unwrap(), &q).unwrap();
        let once = gauge_transform(&s, &p.mul(&q).unwrap()).unwrap();
        prop_assert_eq!(twice.matrix(), once.matrix());
    }
}
