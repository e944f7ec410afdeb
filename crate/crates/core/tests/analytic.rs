use std::f64::consts::PI;

use mattersim::analytic::{
    bessel_j, bessel_j_sequence, bragg_apply, design_pi_pulse, rabi_phase, raman_nath_p_span,
    raman_nath_state, raman_nath_validity_bound, PulseShape,
};
use mattersim::envelope::PulseEnvelope;
use mattersim::state::PlaneWaveState;
use mattersim::Complex64;
use proptest::prelude::*;

/// `J_n(x) = (1/π) ∫₀^π cos(nθ - x sin θ) dθ` by the trapezoid rule, which
/// converges geometrically for this periodic integrand.
fn bessel_by_quadrature(n: u32, x: f64) -> f64 {
    let m = 4000;
    let h = PI / m as f64;
    let f = |t: f64| (n as f64 * t - x * t.sin()).cos();
    let inner: f64 = (1..m).map(|k| f(k as f64 * h)).sum();
    (inner + 0.5 * (f(0.0) + f(PI))) * h / PI
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn bessel_matches_integral_representation() {
    for n in [0, 1, 2, 3, 5, 10, 20] {
        for x in [0.0, 0.2, 1.17, 2.5, 7.3, 15.0, 30.0] {
            let a = bessel_j(n, x).unwrap();
            let b = bessel_by_quadrature(n, x);
            assert!((a - b).abs() < 1e-12, "J_{n}({x}): {a} vs {b}");
        }
    }
}

#[test]
fn bessel_reference_values() {
    assert!((bessel_j(0, 1.0).unwrap() - 0.765_197_686_557_966_6).abs() < 1e-14);
    assert!((bessel_j(1, 1.0).unwrap() - 0.440_050_585_744_933_5).abs() < 1e-14);
    assert!((bessel_j(1, 0.2).unwrap() - 0.099_500_832_639_236_03).abs() < 1e-14);
    assert_eq!(bessel_j(3, 0.0).unwrap(), 0.0);
    assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
}

#[test]
fn raman_nath_amplitudes_and_phases() {
    let gamma = 1.17;
    let (s, deficit) = raman_nath_state(gamma, raman_nath_p_span(gamma).unwrap()).unwrap();
    assert!(deficit < 1e-10);
    let j1 = bessel_j(1, gamma).unwrap();
    assert!((s.amplitude(1) - Complex64::new(0.0, -j1)).norm() < 1e-10);
    assert!((s.amplitude(-1) - s.amplitude(1)).norm() == 0.0);
    let j2 = bessel_j(2, gamma).unwrap();
    assert!((s.amplitude(2) - Complex64::new(-j2, 0.0)).norm() < 1e-10);
    // the often quoted even split is only approximate at this area
    assert!((s.population(0) - 0.5).abs() < 0.03);
}

#[test]
fn validity_bound_values() {
    assert!((raman_nath_validity_bound(3.7).unwrap() - 0.129_968_8).abs() < 1e-6);
    assert!((raman_nath_validity_bound(25.0).unwrap() - 0.05).abs() < 1e-15);
    assert!(raman_nath_validity_bound(0.0).is_err());
}

#[test]
fn rabi_phase_matches_quadrature() {
    let g = PulseEnvelope::gaussian(1.1, 3.0, 0.4).unwrap();
    let (a, b) = g.support();
    let num = simpson(|t| 0.5 * g.value(t).powi(2), a, b, 20_000);
    assert!((rabi_phase(&g) - num).abs() < 1e-10);

    let t = PulseEnvelope::tabulated(vec![(0.0, 0.0), (1.0, 0.8), (2.5, 0.3), (3.0, 0.0)])
        .unwrap();
    let num = simpson(|x| 0.5 * t.value(x).powi(2), 0.0, 3.0, 60_000);
    assert!((rabi_phase(&t) - num).abs() < 1e-8);
}

#[test]
fn designed_pulses_are_pi_pulses() {
    let q = design_pi_pulse(&PulseShape::Gaussian { sigma: 0.6 }).unwrap();
    assert!((2.42..=2.44).contains(&q));
    let env = PulseEnvelope::gaussian(q, 0.0, 0.6).unwrap();
    assert!((rabi_phase(&env) - PI).abs() < 1e-12);

    let profile = vec![(0.0, 0.0), (2.0, 1.0), (4.0, 0.0)];
    let q = design_pi_pulse(&PulseShape::Tabulated { profile: profile.clone() }).unwrap();
    let env = PulseEnvelope::tabulated(profile).unwrap().scaled(q).unwrap();
    assert!((rabi_phase(&env) - PI).abs() < 1e-9);

    let q = design_pi_pulse(&PulseShape::Rectangular { duration: 2.0 * PI / 0.04 }).unwrap();
    assert!((q - 0.2).abs() < 1e-12);
}

#[test]
fn bragg_pi_pulse_phases() {
    let env = PulseEnvelope::rectangular(0.2, 0.0, 2.0 * PI / 0.04).unwrap();
    let dtau = env.duration();
    let out = bragg_apply(&PlaneWaveState::basis(0.0, 0, 1).unwrap(), &env).unwrap();
    assert!((out.amplitude(0) - Complex64::new(-1.0, 0.0)).norm() < 1e-12);

    let out = bragg_apply(&PlaneWaveState::basis(0.0, 1, 1).unwrap(), &env).unwrap();
    assert!(out.population(-1) > 1.0 - 1e-12);
    let expected = Complex64::from_polar(1.0, -4.0 * dtau - 5.0 * PI / 6.0);
    assert!((out.amplitude(-1) - expected).norm() < 1e-9);
}

#[test]
fn bragg_requires_rest_frame_and_three_orders() {
    let env = PulseEnvelope::rectangular(0.2, 0.0, 1.0).unwrap();
    assert!(bragg_apply(&PlaneWaveState::basis(0.1, 0, 1).unwrap(), &env).is_err());
    assert!(bragg_apply(&PlaneWaveState::basis(0.0, 2, 2).unwrap(), &env).is_err());
}

proptest! {
    #[test]
    fn bessel_normalization_identity(x in 0.0f64..40.0) {
        let j = bessel_j_sequence(64, x).unwrap();
        let s = j[0] * j[0] + 2.0 * j[1..].iter().map(|v| v * v).sum::<f64>();
        prop_assert!((s - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn bessel_three_term_recurrence(n in 1u32..30, x in 0.1f64..30.0) {
        let (a, b, c) = (
            bessel_j(n - 1, x).unwrap(),
            bessel_j(n, x).unwrap(),
            bessel_j(n + 1, x).unwrap(),
        );
        prop_assert!((a + c - 2.0 * n as f64 / x * b).abs() < 1e-12 * (1.0 + n as f64 / x));
    }

    #[test]
    fn bragg_pulses_compose(
        q in 0.02f64..0.5,
        d1 in 1.0f64..100.0,
        d2 in 1.0f64..100.0,
        re in prop::array::uniform3(-1.0f64..1.0),
        im in prop::array::uniform3(-1.0f64..1.0),
    ) {
        let amps: Vec<Complex64> = (0..3).map(|i| Complex64::new(re[i], im[i])).collect();
        prop_assume!(amps.iter().map(|a| a.norm_sqr()).sum::<f64>() > 1e-3);
        let s = PlaneWaveState::normalized(0.0, -1, amps).unwrap();
        let first = PulseEnvelope::rectangular(q, 0.0, d1).unwrap();
        let second = PulseEnvelope::rectangular(q, d1, d1 + d2).unwrap();
        let whole = PulseEnvelope::rectangular(q, 0.0, d1 + d2).unwrap();
        let two = bragg_apply(&bragg_apply(&s, &first).unwrap(), &second).unwrap();
        let one = bragg_apply(&s, &whole).unwrap();
        prop_assert!(two.max_abs_diff(&one) < 1e-9);
        prop_assert!((one.norm_sqr() - 1.0).abs() < 1e-12);
    }
}
