use proptest::prelude::*;
use x2susy::exactalg::rational::frac;
use x2susy::qalgebra::{QAlgebra, QElement};
use x2susy::{LinDiffOp, Poly, RatFunc, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| frac(p, q))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(), 0..=max_deg + 1).prop_map(Poly::new)
}

/// Denominators are products of `z - r` and `z^2 + 1`, so never zero.
fn denominator() -> impl Strategy<Value = Poly> {
    (prop::collection::vec(-3i64..=3, 0..=2), any::<bool>()).prop_map(|(roots, quad)| {
        let mut d = Poly::one();
        for r in roots {
            d = &d * &Poly::from_ints(&[-r, 1]);
        }
        if quad {
            d = &d * &Poly::from_ints(&[1, 0, 1]);
        }
        d
    })
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(3), denominator()).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

fn op() -> impl Strategy<Value = LinDiffOp> {
    prop::collection::vec(ratfunc(), 1..=3)
        .prop_map(|cs| LinDiffOp::from_terms(cs.into_iter().enumerate()))
}

fn poly_op() -> impl Strategy<Value = LinDiffOp> {
    prop::collection::vec(poly(2), 1..=3)
        .prop_map(|cs| LinDiffOp::from_terms(cs.into_iter().map(RatFunc::from_poly).enumerate()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_division_reconstructs(p in poly(5), d in poly(3)) {
        prop_assume!(!d.is_zero());
        let (q, r) = p.div_rem(&d);
        prop_assert_eq!(&(&q * &d) + &r, p);
        prop_assert!(r.is_zero() || r.degree() < d.degree());
    }

    #[test]
    fn leibniz_rule(p in poly(4), q in poly(4)) {
        prop_assert_eq!((&p * &q).deriv(), &(&p.deriv() * &q) + &(&p * &q.deriv()));
    }

    #[test]
    fn ratfunc_canonical_form(n in poly(3), d in denominator(), g in denominator(), c in rational()) {
        prop_assume!(c != frac(0, 1));
        let gc = g.scale(&c);
        let a = RatFunc::new(n.clone(), d.clone()).unwrap();
        let b = RatFunc::new(&n * &gc, &d * &gc).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.den().leading() == frac(1, 1));
        prop_assert!(a.num().gcd(a.den()).degree() == Some(0));
    }

    #[test]
    fn ratfunc_field_inverse(f in ratfunc()) {
        prop_assume!(!f.is_zero());
        prop_assert_eq!(&f * &f.inv().unwrap(), RatFunc::one());
    }

    #[test]
    fn operator_application_is_linear(l in op(), f in ratfunc(), g in ratfunc(), a in rational(), b in rational()) {
        let lhs = l.apply(&(&f.scale(&a) + &g.scale(&b)));
        let rhs = &l.apply(&f).scale(&a) + &l.apply(&g).scale(&b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_matches_sequential_application(l in op(), m in op(), f in ratfunc()) {
        prop_assert_eq!(l.compose(&m).apply(&f), l.apply(&m.apply(&f)));
    }

    #[test]
    fn composition_is_associative(l in poly_op(), m in poly_op(), n in poly_op()) {
        prop_assert_eq!(l.compose(&m).compose(&n), l.compose(&m.compose(&n)));
    }

    #[test]
    fn transpose_is_an_involutive_antihomomorphism(l in op(), m in op()) {
        prop_assert_eq!(l.transpose().transpose(), l.clone());
        prop_assert_eq!(l.compose(&m).transpose(), m.transpose().compose(&l.transpose()));
    }

    #[test]
    fn reflection_conjugates_application(l in op(), f in ratfunc()) {
        prop_assert_eq!(l.reflect().reflect(), l.clone());
        prop_assert_eq!(l.reflect().apply(&f.reflect()), l.apply(&f).reflect());
    }

    #[test]
    fn operator_json_round_trip(l in op()) {
        let text = serde_json::to_string(&l).unwrap();
        let back: LinDiffOp = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, l);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn quadratic_extension_inverse(e in ratfunc(), o in ratfunc(), linear in any::<bool>()) {
        let a = if linear { Poly::from_ints(&[0, 2]) } else { Poly::from_ints(&[1, 0, 1]) };
        let alg = QAlgebra::new(a).unwrap();
        let x = QElement::new(e, o);
        prop_assume!(!x.is_zero());
        let inv = alg.inv(&x).unwrap();
        prop_assert_eq!(alg.mul(&x, &inv), QElement::one());
        prop_assert_eq!(alg.mul(&inv, &x), QElement::one());
    }
}
