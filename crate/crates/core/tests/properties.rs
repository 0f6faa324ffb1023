mod common;

use std::f64::consts::PI;

use nalgebra::Vector3;
use photon_fidelity::format::format_g9;
use photon_fidelity::poincare::{direction, wrap_angle};
use photon_fidelity::{
    coherent_fidelity, example_state, extension, fidelity_m, fidelity_of_shift, global_phase,
    theta_boost_y, theta_general, theta_rotation_y, translate, ExtensionQuery, Measure,
    PhysicalConstants, PoincareTransform, QuadratureSpec,
};
use proptest::prelude::*;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn consts() -> PhysicalConstants {
    PhysicalConstants::default()
}

fn off_axis() -> impl Strategy<Value = (f64, f64)> {
    (0.05..PI - 0.05, -PI..PI)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn momentum_fidelity_bounded_and_symmetric(
        l in 0.3..3.0f64,
        shift in prop::array::uniform3(-2.0..2.0f64),
    ) {
        let f = example_state(l).unwrap();
        let g = translate(&f, Vector3::from(shift));
        let fg = fidelity_m(&f, &g, &spec()).unwrap();
        let gf = fidelity_m(&g, &f, &spec()).unwrap();
        prop_assert!(fg.value >= -fg.numerical_error && fg.value <= 1.0 + fg.numerical_error);
        prop_assert!((fg.value - gf.value).abs() < 1e-9);
    }

    #[test]
    fn global_phase_leaves_fidelity_unchanged(a in 0.0..4.0f64, phi in -10.0..10.0f64) {
        let f = example_state(1.0).unwrap();
        let g = translate(&f, Vector3::new(0.0, 0.0, a));
        let base = fidelity_m(&f, &g, &spec()).unwrap().value;
        let turned = fidelity_m(&f, &global_phase(&g, phi), &spec()).unwrap().value;
        prop_assert!((base - turned).abs() < 1e-10);
    }

    #[test]
    fn shift_fidelity_matches_oracle(a in 0.01..20.0f64) {
        let m = fidelity_of_shift(a, Measure::Momentum, 1.0, &spec(), &consts()).unwrap();
        let p = fidelity_of_shift(a, Measure::Position, 1.0, &spec(), &consts()).unwrap();
        prop_assert!((m - (a.atan() / a).powi(2)).abs() < 1e-8);
        prop_assert!((p - (1.0 + a * a).powi(-2)).abs() < 1e-8);
        prop_assert!(p < m);
    }

    #[test]
    fn coherent_fidelity_shrinks_with_photons(
        fm in 0.0..1.0f64,
        phase in -PI..PI,
        n in 0.1..50.0f64,
        extra in 0.1..50.0f64,
    ) {
        let small = coherent_fidelity(n, phase, fm);
        let large = coherent_fidelity(n + extra, phase, fm);
        prop_assert!((0.0..=1.0).contains(&small));
        prop_assert!(large <= small);
    }

    #[test]
    fn general_phase_matches_closed_forms(
        (theta, phi) in off_axis(),
        alpha in -3.0..3.0f64,
        beta in -0.95..0.95f64,
        k in 0.1..10.0f64,
    ) {
        let kv = direction(theta, phi) * k;
        let rot = PoincareTransform::rotation_y(alpha).unwrap();
        let boost = PoincareTransform::boost_y(beta).unwrap();
        for (t, closed) in [
            (&rot, theta_rotation_y(alpha, theta, phi)),
            (&boost, theta_boost_y(beta, theta, phi)),
        ] {
            let kp = t.momentum_map(kv);
            prop_assume!(kp.x.hypot(kp.y) > 1e-3 * kp.norm());
            let (Ok(general), Ok(closed)) = (theta_general(t, kv), closed) else {
                continue;
            };
            prop_assert!(wrap_angle(general - closed).abs() < 1e-8);
        }
    }

    #[test]
    fn wigner_factor_is_unimodular(
        axis in prop::array::uniform3(-1.0..1.0f64),
        angle in -PI..PI,
        beta in -0.95..0.95f64,
        (theta, phi) in off_axis(),
    ) {
        let axis = Vector3::from(axis);
        prop_assume!(axis.norm() > 0.1);
        let kv = direction(theta, phi);
        for t in [
            PoincareTransform::rotation(axis, angle).unwrap(),
            PoincareTransform::boost(axis, beta).unwrap(),
        ] {
            let kp = t.momentum_map(kv);
            prop_assume!(kp.x.hypot(kp.y) > 1e-3 * kp.norm());
            let w = t.wigner_factor(kv).unwrap();
            prop_assert!((w.norm() - 1.0).abs() < 1e-9);
            let (o1, o2) = (t.momentum_map(kv), t.inverse_momentum_map(kp));
            prop_assert!((o1.norm() - t.frequency_ratio(kv) * kv.norm()).abs() < 1e-9 * o1.norm());
            prop_assert!((o2 - kv).norm() < 1e-9);
        }
    }

    #[test]
    fn g9_round_trips(x in prop::num::f64::NORMAL) {
        let back: f64 = format_g9(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-9 * x.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn extension_returns_threshold(n in 2.0..40.0f64, threshold in 0.05..0.5f64) {
        let q = ExtensionQuery::new(Measure::Coherent, n).with_threshold(threshold);
        let s = extension(&q, &spec(), &consts()).unwrap();
        let back = fidelity_of_shift(s, Measure::Coherent, n, &spec(), &consts()).unwrap();
        prop_assert!((back - threshold).abs() < 1e-5);
        prop_assert!((s - common::extension(n, threshold)).abs() < 1e-5 * s.max(1.0));
    }
}

#[test]
fn curves_strictly_decrease() {
    for measure in [Measure::Momentum, Measure::Position] {
        let values: Vec<f64> = (1..=80)
            .map(|i| fidelity_of_shift(0.25 * i as f64, measure, 1.0, &spec(), &consts()).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]), "{measure}");
    }
}

#[test]
fn coherent_curves_order_by_photon_number() {
    for i in 1..=20 {
        let a = 0.25 * i as f64;
        let values: Vec<f64> = [1.0, 3.0, 10.0, 30.0]
            .iter()
            .map(|&n| fidelity_of_shift(a, Measure::Coherent, n, &spec(), &consts()).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]), "a={a}: {values:?}");
    }
}

#[test]
fn one_photon_coherent_curve_stays_near_momentum_curve() {
    let sup = (0..=500)
        .map(|i| {
            let a = 5.0 * i as f64 / 500.0;
            let m = fidelity_of_shift(a, Measure::Momentum, 1.0, &spec(), &consts()).unwrap();
            let c = fidelity_of_shift(a, Measure::Coherent, 1.0, &spec(), &consts()).unwrap();
            (c - m).abs()
        })
        .fold(0.0, f64::max);
    // Independent oracle: the supremum on [0, 5l] is reached at a = 5l.
    let fm = common::fidelity_m(5.0);
    let oracle = ((-2.0 * (1.0 - fm.sqrt())).exp() - fm).abs();
    assert!((sup - oracle).abs() < 1e-8, "{sup} vs {oracle}");
    assert!((sup - 0.15897109638833545).abs() < 1e-8);
}
