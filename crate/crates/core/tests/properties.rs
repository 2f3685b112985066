use std::f64::consts::{FRAC_PI_2, PI, TAU};

use ising_composite::analysis::{delta_of, epsilon_of};
use ising_composite::ising::{compile_ising, PulseMerge};
use ising_composite::{
    threshold_delta, threshold_epsilon, Branch, Family, PulseSequence, Quaternion, UnitaryOracle, DEFAULT_TOLERANCE,
};
use proptest::prelude::*;

fn angle() -> impl Strategy<Value = f64> {
    -4.0 * PI..4.0 * PI
}

fn unit_quaternion() -> impl Strategy<Value = Quaternion> {
    (angle(), angle(), angle(), angle()).prop_map(|(a, p, b, r)| {
        // x-y pulse products reach every SU(2) element.
        Quaternion::from_pulse(a, p).unwrap() * Quaternion::from_pulse(b, r).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn product_matches_matrix_oracle((a1, p1, a2, p2) in (angle(), angle(), angle(), angle())) {
        let qa = Quaternion::from_pulse(a1, p1).unwrap();
        let qb = Quaternion::from_pulse(a2, p2).unwrap();
        let ua = UnitaryOracle::from_pulse(a1, p1).unwrap();
        let ub = UnitaryOracle::from_pulse(a2, p2).unwrap();
        let q = qa * qb;
        prop_assert!(q.is_unit());
        let oracle = ua.matmul(&ub);
        prop_assert!(oracle.max_abs_diff(&q.to_unitary()) < 1e-12);
        prop_assert!((1.0 - oracle.fidelity(&q.to_unitary())).abs() < 1e-12);
    }

    #[test]
    fn fidelity_matches_trace_overlap(a in unit_quaternion(), b in unit_quaternion()) {
        let trace = a.to_unitary().fidelity(&b.to_unitary());
        prop_assert!((a.fidelity(&b) - trace).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn multiplication_is_associative(a in unit_quaternion(), b in unit_quaternion(), c in unit_quaternion()) {
        prop_assert!(((a * b) * c).approx_eq_up_to_sign(&(a * (b * c)), 1e-12));
    }

    #[test]
    fn opposite_rotation_undoes_pulse(theta in angle(), phase in angle()) {
        let q = Quaternion::from_pulse(theta, phase).unwrap() * Quaternion::from_pulse(-theta, phase).unwrap();
        prop_assert!(q.approx_eq_up_to_sign(&Quaternion::IDENTITY, 1e-12));
    }

    #[test]
    fn sign_branches_share_fidelity(theta in 0.05..TAU, g in -1.5f64..0.5) {
        for family in [Family::Bb1, Family::Nb1, Family::Pb1] {
            let plus = family.build(theta, Branch::Plus).unwrap();
            let minus = family.build(theta, Branch::Minus).unwrap();
            let ideal = plus.ideal();
            let fp = plus.net_quaternion(g).fidelity(&ideal);
            let fm = minus.net_quaternion(g).fidelity(&ideal);
            prop_assert!((fp - fm).abs() < 1e-12);
        }
    }

    #[test]
    fn compiled_schedules_track_quaternion_fidelity(theta in 0.05..TAU, g in -1.2f64..0.3, spin in 0usize..2) {
        for family in Family::BUILT_IN {
            let seq = family.build(theta, Branch::Plus).unwrap();
            let sched = compile_ising(&seq, spin).unwrap();
            let two = sched.propagator(g).fidelity(&sched.ideal_gate());
            let one = seq.net_quaternion(g).fidelity(&seq.ideal());
            prop_assert!((two - one).abs() < 1e-9, "{family} θ={theta} g={g}");
            prop_assert!(sched.propagator(g).is_unitary(1e-12));
        }
    }
}

#[test]
fn every_family_does_nothing_extra_without_error() {
    for i in 1..=24 {
        let theta = TAU * i as f64 / 24.0;
        for family in Family::BUILT_IN {
            for branch in [Branch::Plus, Branch::Minus] {
                let seq = family.build(theta, branch).unwrap();
                let f = seq.net_quaternion(0.0).fidelity(&seq.ideal());
                assert!(1.0 - f <= 1e-12, "{family} θ={theta}");
            }
        }
    }
}

#[test]
fn compiled_schedules_suppress_against_identity() {
    let id = ising_composite::TwoQubitPropagator::identity();
    for family in Family::BUILT_IN {
        let seq = family.build(FRAC_PI_2, Branch::Plus).unwrap();
        let sched = compile_ising(&seq, 1).unwrap();
        for i in 0..=100 {
            let g = -1.2 + 0.5 * i as f64 / 100.0;
            let two = sched.propagator(g).fidelity(&id);
            let one = seq.net_quaternion(g).fidelity(&Quaternion::IDENTITY);
            assert!((two - one).abs() < 1e-9);
        }
        let at_zero = sched.propagator(-1.0).fidelity(&id);
        assert!((1.0 - at_zero).abs() < 1e-12);
    }
}

#[test]
fn combined_pulses_keep_the_propagator() {
    for family in Family::BUILT_IN {
        let seq = family.build(FRAC_PI_2, Branch::Minus).unwrap();
        let a = compile_ising(&seq, 0).unwrap();
        let b = ising_composite::ising::compile_ising_with(&seq, 0, PulseMerge::Combine).unwrap();
        for g in [-1.1, -0.5, 0.0, 0.2] {
            assert!((a.propagator(g).fidelity(&b.propagator(g)) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn cleanup_pass_is_idempotent() {
    for family in Family::BUILT_IN {
        for theta in [0.3, FRAC_PI_2, PI, TAU] {
            let seq = family.build(theta, Branch::Plus).unwrap();
            for merge in [PulseMerge::CancelOnly, PulseMerge::Combine] {
                let sched = ising_composite::ising::compile_ising_with(&seq, 1, merge).unwrap();
                assert_eq!(sched.simplified(merge), sched);
            }
        }
    }
}

#[test]
fn two_qubit_thresholds_match_single_qubit() {
    for family in Family::BUILT_IN {
        let seq = family.build(FRAC_PI_2, Branch::Plus).unwrap();
        let sched = compile_ising(&seq, 1).unwrap();
        let ideal = sched.ideal_gate();
        let id = ising_composite::TwoQubitPropagator::identity();
        let eps2 = epsilon_of(|g| sched.propagator(g).fidelity(&ideal), DEFAULT_TOLERANCE).unwrap();
        let del2 = delta_of(|g| sched.propagator(g).fidelity(&id), DEFAULT_TOLERANCE).unwrap();
        let eps1 = threshold_epsilon(&seq, FRAC_PI_2, DEFAULT_TOLERANCE).unwrap();
        let del1 = threshold_delta(&seq, DEFAULT_TOLERANCE).unwrap();
        assert!((eps1.value() - eps2.value()).abs() < 1e-6, "{family}");
        assert!((del1.value() - del2.value()).abs() < 1e-6, "{family}");
    }
}

/// Least-squares slope of log(1 − F) against log(x) over two decades.
fn log_slope(infidelity: impl Fn(f64) -> f64, x_lo: f64) -> f64 {
    let pts: Vec<(f64, f64)> = (0..=20)
        .map(|i| {
            let x = x_lo * 10f64.powf(2.0 * i as f64 / 20.0);
            (x.ln(), infidelity(x).ln())
        })
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn infidelity_orders_near_expansion_points() {
    let simple = PulseSequence::simple(FRAC_PI_2).unwrap();
    let bb1 = PulseSequence::bb1(FRAC_PI_2, Branch::Plus).unwrap();
    let nb1 = PulseSequence::nb1(FRAC_PI_2, Branch::Plus).unwrap();
    let near_zero = |seq: &PulseSequence| {
        let ideal = seq.ideal();
        let seq = seq.clone();
        move |g: f64| 1.0 - seq.net_quaternion(g).fidelity(&ideal)
    };
    let near_off = |seq: &PulseSequence| {
        let seq = seq.clone();
        move |lambda: f64| 1.0 - seq.net_quaternion(lambda - 1.0).fidelity(&Quaternion::IDENTITY)
    };
    // Windows chosen so 1 − F stays well above rounding noise.
    let s = log_slope(near_zero(&simple), 1e-3);
    assert!((s - 2.0).abs() < 0.2, "simple at g=0: {s}");
    let s = log_slope(near_zero(&bb1), 5e-3);
    assert!((s - 6.0).abs() < 0.2, "bb1 at g=0: {s}");
    let s = log_slope(near_off(&simple), 1e-3);
    assert!((s - 2.0).abs() < 0.2, "simple at λ=0: {s}");
    let s = log_slope(near_off(&nb1), 5e-3);
    assert!((s - 6.0).abs() < 0.2, "nb1 at λ=0: {s}");
}

#[test]
fn threshold_guards_hold() {
    for family in Family::BUILT_IN {
        let seq = family.build(FRAC_PI_2, Branch::Plus).unwrap();
        let ideal = seq.ideal();
        let eps = threshold_epsilon(&seq, FRAC_PI_2, DEFAULT_TOLERANCE).unwrap().value();
        let worst = [eps, -eps]
            .map(|g| 1.0 - seq.net_quaternion(g).fidelity(&ideal))
            .into_iter()
            .fold(0.0, f64::max);
        assert!((worst - DEFAULT_TOLERANCE).abs() <= 1e-9, "{family}: {worst}");
        for g in [0.5 * eps, -0.5 * eps] {
            assert!(1.0 - seq.net_quaternion(g).fidelity(&ideal) < DEFAULT_TOLERANCE);
        }

        let delta = threshold_delta(&seq, DEFAULT_TOLERANCE).unwrap().value();
        let at = 1.0 - seq.net_quaternion(delta - 1.0).fidelity(&Quaternion::IDENTITY);
        assert!((at - DEFAULT_TOLERANCE).abs() <= 1e-9, "{family}: {at}");
        let half = 1.0 - seq.net_quaternion(0.5 * delta - 1.0).fidelity(&Quaternion::IDENTITY);
        assert!(half < DEFAULT_TOLERANCE);
    }
}

#[test]
fn thresholds_shrink_with_tighter_tolerance() {
    for family in Family::BUILT_IN {
        let seq = family.build(FRAC_PI_2, Branch::Plus).unwrap();
        let e = |tol| threshold_epsilon(&seq, FRAC_PI_2, tol).unwrap().value();
        let d = |tol| threshold_delta(&seq, tol).unwrap().value();
        assert!(e(1e-4) > e(1e-6) && e(1e-6) > e(1e-8), "{family}");
        assert!(d(1e-4) > d(1e-6) && d(1e-6) > d(1e-8), "{family}");
    }
}
