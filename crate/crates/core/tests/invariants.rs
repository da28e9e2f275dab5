use proptest::prelude::*;
use x2susy::exactalg::rational::{frac, int};
use x2susy::laguerre::restricted_matrix;
use x2susy::models::{make_model, ExampleId};
use x2susy::qalgebra::{build_physical_h, build_physical_p, PhysicalSystem, QElement, QOperator, Sign};
use x2susy::quasiops::{build, restricted_columns, Family};
use x2susy::report::Status;
use x2susy::susybuild::{charge_kernel_report, w_tilde_closed, w_tilde_general};
use x2susy::verify::{self, alpha_is_generic, sample_alphas, Stage, VerifyConfig};
use x2susy::x2spaces::{x2a_basis, x2b_basis};
use x2susy::{ParamContext, Poly, RatFunc, Rational};

/// Generic for `N <= 5`: avoids 0 and 1 under shifts by up to `N`.
fn generic_alpha() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 2i64..=7)
        .prop_map(|(p, q)| frac(p, q))
        .prop_filter("generic", |a| alpha_is_generic(a, 5))
}

fn weights() -> impl Strategy<Value = [Rational; 4]> {
    prop::array::uniform4((-3i64..=3, 1i64..=3).prop_map(|(p, q)| frac(p, q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn preserving_operators_keep_their_spaces(a in generic_alpha(), w in weights(), n in 3u32..=5) {
        let ctx = ParamContext::new(a.clone(), n).unwrap().with_weights(w);
        let xa = x2a_basis(&a, n).unwrap();
        let xb = x2b_basis(&a, n).unwrap();
        for i in 1..=4 {
            prop_assert!(restricted_columns(&build(Family::J, i, &ctx).unwrap(), &xa).is_some());
            prop_assert!(restricted_columns(&build(Family::K, i, &ctx).unwrap(), &xb).is_some());
        }
    }

    #[test]
    fn solvable_spectrum_is_triangular(a in generic_alpha(), a1 in 1i64..=4, n in 3u32..=5) {
        let ctx = ParamContext::new(a, n).unwrap().with_weights([int(a1), int(0), int(0), int(0)]);
        let m = restricted_matrix(&ctx, Sign::Minus).unwrap();
        prop_assert!(m.is_triangular());
        let want: Vec<Rational> = (1..=n as i64).map(|k| int(a1 * (k + 1))).collect();
        prop_assert_eq!(m.diagonal(), want);
    }

    #[test]
    fn charges_annihilate_their_spaces(a in generic_alpha(), w in weights(), n in 3u32..=4) {
        let ctx = ParamContext::new(a.clone(), n).unwrap().with_weights(w);
        let r = charge_kernel_report(&ctx).unwrap();
        prop_assert!(r.minus_annihilates && r.plus_annihilates && r.w_matches_coefficient);
        prop_assert_eq!(r.kernel_dimension, n as usize);
        prop_assert_eq!(w_tilde_closed(&a, n), w_tilde_general(&a, n));
    }

    #[test]
    fn shape_invariance_constant(a in (11i64..=60).prop_map(|p| frac(p, 10)), n in 3u32..=6) {
        let m = make_model(ExampleId::Rational, &ParamContext::example1(a.clone(), n).unwrap()).unwrap();
        let shifted = make_model(
            ExampleId::Rational,
            &ParamContext::example1(&a + int(n as i64), n).unwrap(),
        ).unwrap();
        for q in [0.3, 1.0, 2.7, 5.0] {
            let d = m.v(Sign::Plus, q) - shifted.v(Sign::Minus, q);
            prop_assert!((d - 2.0 * n as f64).abs() < 1e-9, "q = {q}: {d}");
        }
    }
}

#[test]
fn alpha_samples_are_reproducible() {
    let a = sample_alphas(11, 20, 8);
    assert_eq!(a, sample_alphas(11, 20, 8));
    assert!(a.iter().all(|x| alpha_is_generic(x, 8)));
}

#[test]
fn report_is_byte_identical_across_runs() {
    let cfg = VerifyConfig {
        stages: vec![Stage::Spaces, Stage::Quasiops],
        enns: vec![3],
        samples: 3,
        seed: 5,
        ..VerifyConfig::default()
    };
    let a = verify::run(&cfg).unwrap();
    let b = verify::run(&cfg).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert!(a.is_pass());
    assert!(a.records.iter().all(|r| !r.anchor.is_empty() && r.status == Status::Pass));
}

#[test]
fn perturbed_hamiltonian_breaks_intertwining() {
    let ctx = ParamContext::example1(frac(5, 2), 3).unwrap();
    let sys = PhysicalSystem::new(&ctx).unwrap();
    let alg = &sys.alg;
    let hm = build_physical_h(&ctx, Sign::Minus).unwrap();
    let hp = build_physical_h(&ctx, Sign::Plus).unwrap();
    let pm = build_physical_p(&ctx, Sign::Minus).unwrap();
    let residual = |hm: &QOperator, hp: &QOperator| alg.compose(&pm, hm).sub(&alg.compose(hp, &pm));
    assert!(residual(&hm, &hp).is_zero());

    // A common constant shift of both partners survives; one-sided shifts do not.
    let shift = QOperator::mult(QElement::constant(int(7)));
    assert!(residual(&hm.add(&shift), &hp.add(&shift)).is_zero());
    assert!(!residual(&hm.add(&shift), &hp).is_zero());
    let bump = QOperator::mult(QElement::even(RatFunc::from_poly(Poly::z())));
    assert!(!residual(&hm.add(&bump), &hp.add(&bump)).is_zero());
}

#[test]
fn mismatched_partners_do_not_intertwine() {
    let ctx = ParamContext::example1(frac(5, 2), 4).unwrap();
    let other = ParamContext::example1(frac(5, 2), 4).unwrap().with_weights([int(2), frac(1, 2), int(0), int(0)]);
    let alg = PhysicalSystem::new(&ctx).unwrap().alg;
    let pm = build_physical_p(&ctx, Sign::Minus).unwrap();
    let hm = build_physical_h(&ctx, Sign::Minus).unwrap();
    let hp_other = build_physical_h(&other, Sign::Plus).unwrap();
    assert!(!alg.compose(&pm, &hm).sub(&alg.compose(&hp_other, &pm)).is_zero());
}
