use num_bigint::BigInt;
use proptest::prelude::*;

use dvg_core::symcore::gcd::lcm;
use dvg_core::symcore::{gcd, parse_expression, Monomial, Ring};
use dvg_core::{Poly, RatFunc, Rational};

fn ring() -> Ring {
    Ring::new(&["x", "y", "q"]).unwrap()
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-5i64..=5, 0u32..3, 0u32..3, 0u32..2), 0..5).prop_map(|terms| {
        let r = ring();
        Poly::from_terms(
            &r,
            terms
                .into_iter()
                .map(|(c, a, b, d)| (Monomial::from_exponents(vec![a, b, d]), Rational::from_integer(BigInt::from(c)))),
        )
    })
}

fn nonzero_poly() -> impl Strategy<Value = Poly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn display_parses_back(r in ratfunc()) {
        let back: RatFunc = parse_expression(&r.to_string(), &ring()).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn canonical_form_is_reduced(r in ratfunc()) {
        prop_assert!(gcd(r.num(), r.den()).is_constant());
        prop_assert!(r.den().leading_coeff() == Rational::from_integer(1.into()));
    }

    #[test]
    fn field_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn gcd_divides_and_is_greatest(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let g = gcd(&(&a * &c), &(&b * &c));
        prop_assert!((&a * &c).exact_div(&g).is_some());
        prop_assert!((&b * &c).exact_div(&g).is_some());
        prop_assert!(g.exact_div(&c.monic()).is_some());
        prop_assert_eq!(gcd(&a, &b), gcd(&b, &a));
        let l = lcm(&a, &b);
        prop_assert!(l.exact_div(&a).is_some() && l.exact_div(&b).is_some());
    }

    #[test]
    fn substitution_is_a_homomorphism(a in ratfunc(), b in ratfunc(), s in ratfunc()) {
        let bind = vec![Some(s.clone()), None, None];
        let sub = |r: &RatFunc| r.substitute(&bind);
        if let (Ok(sa), Ok(sb), Ok(sp)) = (sub(&a), sub(&b), sub(&(&a * &b))) {
            prop_assert_eq!(sp, &sa * &sb);
        }
        if let (Ok(sa), Ok(sb), Ok(ss)) = (sub(&a), sub(&b), sub(&(&a + &b))) {
            prop_assert_eq!(ss, &sa + &sb);
        }
    }

    #[test]
    fn derivative_obeys_leibniz(a in ratfunc(), b in ratfunc()) {
        let d = |r: &RatFunc| r.differentiate(0);
        prop_assert_eq!(d(&(&a * &b)), &(&d(&a) * &b) + &(&a * &d(&b)));
    }
}
