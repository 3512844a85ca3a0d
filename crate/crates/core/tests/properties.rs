//! Property tests for the invariants each module promises.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use proptest::prelude::*;

use ionbound::bounds::{self, BoundOptions, ShiftMode, StateData};
use ionbound::hydrogen::{self, HydrogenState, ShiftNorm};
use ionbound::kato::{self, ResolventBoundParams};
use ionbound::pulse::Pulse;
use ionbound::quadrature::Integrator;
use ionbound::volkov::{self, GaugeTransform, SampledWave, ShiftOptions};

fn ground() -> StateData {
    StateData::hydrogen(&HydrogenState::ground())
}

fn any_pulse() -> impl Strategy<Value = Pulse> {
    let cosine = (-30.0..30.0f64, 0.05..60.0f64, 0.0..8.0f64)
        .prop_map(|(e, w, t)| Pulse::cosine(e, w, t).unwrap());
    let ramped =
        (-30.0..30.0f64, 0.5..20.0f64, 0.25..2.0f64, 0.0..4.0f64).prop_map(|(e, w, r, extra)| {
            Pulse::cosine_ramped(e, w, r, 2.0 * r * 2.0 * PI / w + extra).unwrap()
        });
    let constant = (-5.0..5.0f64, 0.0..4.0f64).prop_map(|(e, t)| Pulse::constant(e, t).unwrap());
    let tabulated = (
        proptest::collection::vec(-10.0..10.0f64, 2..10),
        0.1..5.0f64,
    )
        .prop_map(|(v, tau)| {
            let n = v.len() - 1;
            let samples = v
                .into_iter()
                .enumerate()
                .map(|(k, e)| (tau * (k as f64 / n as f64), e))
                .collect();
            Pulse::tabulated(samples, tau).unwrap()
        });
    prop_oneof![cosine, ramped, constant, tabulated]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // ---- quadrature

    #[test]
    fn quadrature_is_linear(alpha in -3.0..3.0f64, beta in -3.0..3.0f64, k in 0.1..8.0f64, hi in 0.1..6.0f64) {
        let q = Integrator::default();
        let f = |x: f64| (k * x).sin();
        let g = |x: f64| (-x).exp() * x * x;
        let lhs = q.integrate(|x| alpha * f(x) + beta * g(x), 0.0, hi).unwrap();
        let fi = q.integrate(f, 0.0, hi).unwrap();
        let gi = q.integrate(g, 0.0, hi).unwrap();
        let tol = lhs.error_estimate + alpha.abs() * fi.error_estimate + beta.abs() * gi.error_estimate + 1e-12;
        prop_assert!((lhs.value - (alpha * fi.value + beta * gi.value)).abs() <= tol);
    }

    #[test]
    fn quadrature_is_additive(a in -2.0..0.0f64, b in 0.0..2.0f64, c in 2.0..5.0f64) {
        let q = Integrator::default();
        let f = |x: f64| (x * x).cos() + 1.0 / (1.0 + x * x);
        let whole = q.integrate(f, a, c).unwrap();
        let left = q.integrate(f, a, b).unwrap();
        let right = q.integrate(f, b, c).unwrap();
        prop_assert!((whole.value - left.value - right.value).abs() <= whole.error_estimate + left.error_estimate + right.error_estimate + 1e-12);
    }

    #[test]
    fn semi_infinite_matches_truncated(c in 0.01..10.0f64) {
        // the shifted-Coulomb integrands, decay rate 2
        let q = Integrator::new(1e-14, 1e-13);
        let decay = 2.0;
        let cut = c + 40.0 / decay;
        let fs: [Box<dyn Fn(f64) -> f64>; 2] = [
            Box::new(|r: f64| 4.0 * r * (-2.0 * r).exp()),
            Box::new(move |r: f64| 2.0 / c * r * (-2.0 * r).exp() * (2.0 * c / (r - c)).ln_1p()),
        ];
        for f in &fs {
            let tail = q.integrate_semi_infinite(f, c + 0.5, decay).unwrap().value;
            let finite = q.integrate(f, c + 0.5, cut).unwrap().value;
            prop_assert!((tail - finite).abs() < 1e-12, "{tail} vs {finite}");
        }
    }

    // ---- pulse

    #[test]
    fn displacement_moment_identity(p in any_pulse()) {
        let tau = p.duration();
        for k in 0..50 {
            let t = tau * k as f64 / 49.0;
            let direct = p.displacement_by_quadrature(t).unwrap();
            let moment = p.displacement_by_moment(t).unwrap();
            prop_assert!((direct - moment).abs() < 1e-9 * direct.abs().max(1.0), "t={t}: {direct} vs {moment}");
        }
    }

    #[test]
    fn field_vanishes_outside_support(p in any_pulse(), s in 0.0..100.0f64) {
        let tau = p.duration();
        prop_assert_eq!(p.field(-s - 1e-9).unwrap(), 0.0);
        prop_assert_eq!(p.field(tau + s + 1e-9).unwrap(), 0.0);
        // b frozen after the pulse, c linear in t
        let b = p.momentum_transfer(tau).unwrap();
        prop_assert_eq!(p.momentum_transfer(tau + s).unwrap(), b);
        let c = p.displacement(tau).unwrap();
        prop_assert!((p.displacement(tau + s).unwrap() - (c + s * b)).abs() < 1e-9 * (1.0 + (s * b).abs()));
    }

    #[test]
    fn integer_cycle_null(e0 in -40.0..40.0f64, omega in 0.05..80.0f64, n in 1u32..=4) {
        let p = Pulse::cosine_cycles(e0, omega, n as f64).unwrap();
        let tau = p.duration();
        prop_assert!(p.momentum_transfer(tau).unwrap().abs() < 1e-10 * (1.0 + e0.abs() / omega));
        prop_assert!(p.displacement(tau).unwrap().abs() < 1e-10 * (1.0 + e0.abs() / (omega * omega)));
    }

    #[test]
    fn cosine_closed_forms_match_quadrature(e0 in -20.0..20.0f64, omega in 0.1..50.0f64, t in 0.0..6.0f64) {
        let p = Pulse::cosine(e0, omega, 6.0).unwrap();
        let scale = 1.0 + e0.abs() / (omega * omega);
        prop_assert!((p.momentum_transfer(t).unwrap() - p.momentum_transfer_by_quadrature(t).unwrap()).abs() < 1e-10 * (1.0 + e0.abs() / omega));
        prop_assert!((p.displacement(t).unwrap() - p.displacement_by_quadrature(t).unwrap()).abs() < 1e-10 * scale * (1.0 + t));
        let a = p.volkov_phase(t).unwrap();
        prop_assert!((a - p.volkov_phase_by_quadrature(t).unwrap()).abs() < 1e-9 * a.max(1.0));
    }

    // ---- hydrogen

    #[test]
    fn shifted_integrals_decrease(c1 in 0.001..30.0f64, ratio in 1.05..3.0f64) {
        let c2 = c1 * ratio;
        prop_assert!(hydrogen::coulomb_mean_shifted(c1).unwrap() > hydrogen::coulomb_mean_shifted(c2).unwrap());
        prop_assert!(hydrogen::coulomb_sq_mean_shifted(c1).unwrap() > hydrogen::coulomb_sq_mean_shifted(c2).unwrap());
    }

    #[test]
    fn exact_shift_norm_below_estimate_below_two(c in 0.0..60.0f64) {
        let est = hydrogen::shift_difference_norm(c, ShiftNorm::Estimate).unwrap().value;
        let exact = hydrogen::shift_difference_norm(c, ShiftNorm::Exact).unwrap().value;
        prop_assert!(exact <= est + 1e-12);
        prop_assert!(est <= 2.0);
        if c > 1e-3 {
            prop_assert!(est < 2.0);
        }
    }

    #[test]
    fn cross_term_quadrature_matches_closed_form(c in 0.001..40.0f64) {
        let q = hydrogen::cross_term(c).unwrap();
        prop_assert!((q - hydrogen::cross_term_closed(c)).abs() < 1e-8, "c={c}");
    }

    // ---- bounds

    #[test]
    fn bound_logic(p in any_pulse(), drop in any::<bool>()) {
        let state = ground();
        let opts = BoundOptions::default().drop_spreading(drop);
        let all = bounds::all_bounds(&p, &state, opts).unwrap();
        let (u1, u2, low, pf, pert) = (&all[0], &all[1], &all[2], &all[3], &all[4]);
        prop_assert!(!(u1.valid && low.valid));
        prop_assert_eq!(u1.term("T1"), u2.term("T1"));
        prop_assert_eq!(u1.term("T2"), u2.term("T2"));
        prop_assert!(pert.raw.unwrap() <= pf.raw.unwrap() * (1.0 + 1e-10) + 1e-15);
        for r in &all {
            if let Some(v) = r.clipped {
                prop_assert!((0.0..=1.0).contains(&v));
            }
            if r.valid && r.kind != bounds::BoundKind::Lower {
                prop_assert!(r.raw.unwrap() >= 0.0);
            }
            if let (Some(raw), Some(re)) = (r.raw, r.recombine()) {
                prop_assert!((raw - re).abs() <= 1e-12 * raw.abs().max(1.0));
            }
        }
    }

    #[test]
    fn upper2_field_independent_at_integer_cycles(omega in 0.2..60.0f64, n in 1u32..=4) {
        let state = ground();
        let tau = 2.0 * PI * n as f64 / omega;
        let raws: Vec<f64> = [5.0, 10.0, 20.0]
            .iter()
            .map(|&e0| bounds::upper_bound_2(&Pulse::cosine(e0, omega, tau).unwrap(), &state, BoundOptions::default()).unwrap().raw.unwrap())
            .collect();
        for r in &raws {
            prop_assert!((r - raws[0]).abs() < 1e-10 * raws[0].max(1.0), "{raws:?}");
        }
    }

    #[test]
    fn lower_monotone_in_field(omega in 0.3..5.0f64) {
        let state = ground();
        let tau = std::f64::consts::FRAC_PI_2 / omega;
        let opts = BoundOptions::default().drop_spreading(true);
        let mut prev = f64::NEG_INFINITY;
        for e0 in [5.0, 10.0, 20.0, 40.0, 80.0] {
            let r = bounds::lower_bound(&Pulse::cosine(e0, omega, tau).unwrap(), &state, opts).unwrap();
            let v = r.raw.unwrap_or(f64::NEG_INFINITY);
            prop_assert!(v >= prev);
            prev = v;
        }
    }

    // ---- kato

    #[test]
    fn resolvent_optimum_is_a_lower_bound(rho in 1e-3..20.0f64, r in 1e-3..20.0f64) {
        let f = kato::resolvent_bound(ResolventBoundParams::new(rho, r).unwrap());
        prop_assert!(f >= kato::resolvent_constant() - 1e-9);
    }

    #[test]
    fn coefficient_uniform_in_n(n in 1i64..=50, l_frac in 0.0..1.0f64) {
        let l = ((n as f64) * l_frac).floor() as i64;
        let k = kato::generic_first_term_coefficient(&HydrogenState::new(n, l.min(n - 1), 0).unwrap());
        prop_assert!(k <= 19.4);
        prop_assert!(k > kato::resolvent_constant());
    }

    // ---- volkov

    #[test]
    fn gauge_group_law(p1 in -3.0..3.0f64, k1 in -3.0..3.0f64, s1 in -3.0..3.0f64,
                       p2 in -3.0..3.0f64, k2 in -3.0..3.0f64, s2 in -3.0..3.0f64, z in -4.0..4.0f64) {
        let g1 = GaugeTransform::new(p1, k1, s1);
        let g2 = GaugeTransform::new(p2, k2, s2);
        prop_assert!(g1.compose(&g1.inverse()).unwrap().approx_eq(&GaugeTransform::identity(), 1e-12));
        let f = |y: f64| Complex64::new((-y * y).exp(), y.cos());
        let composed = g1.compose(&g2).unwrap().apply_fn(f, z);
        let stepwise = g1.apply_fn(|y| g2.apply_fn(f, y), z);
        prop_assert!((composed - stepwise).norm() < 1e-12);
    }

    #[test]
    fn kh_transform_preserves_norm_on_grid(b in -5.0..5.0f64, a in -5.0..5.0f64, steps in -60i32..60) {
        let wave = SampledWave::sample(-25.0, 25.0, 1001, |z| Complex64::new((-z * z / 2.0).exp(), 0.0)).unwrap();
        let c = steps as f64 * wave.dz;
        let out = volkov::kh_transform(&wave, b, c, a, false, ShiftOptions::default()).unwrap();
        prop_assert!(!out.interpolated);
        prop_assert!((out.norm_after - out.norm_before).abs() < 1e-10 * out.norm_before);
        let back = volkov::kh_transform(&out.wave, b, c, a, true, ShiftOptions::default()).unwrap();
        let err = back.wave.values.iter().zip(&wave.values).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
    }
}

#[test]
fn exact_shift_norm_approaches_sqrt2_from_below() {
    // √(N₂ − 2X + 2) with N₂ ~ 1/c² and X ~ 1/c: the gap to √2 is 1/(√2 c)
    for c in [50.0, 200.0, 1000.0] {
        let v = hydrogen::shift_difference_norm(c, ShiftNorm::Exact)
            .unwrap()
            .value;
        assert!(v < SQRT_2);
        let gap = SQRT_2 - v;
        assert!((gap * c - 1.0 / SQRT_2).abs() < 0.02, "c={c}: gap {gap}");
    }
    let far = hydrogen::shift_difference_norm(1000.0, ShiftNorm::Exact)
        .unwrap()
        .value;
    assert!((far - SQRT_2).abs() < 1e-3);
}

#[test]
fn shift_modes_agree_on_ordering_along_a_pulse() {
    let state = ground();
    let p = Pulse::cosine(3.0, 1.5, 2.0).unwrap();
    let t1 =
        |mode| bounds::first_term(&p, &state, BoundOptions::default().shift_mode(mode)).unwrap();
    let (est, quad, exact) = (
        t1(ShiftMode::Estimate),
        t1(ShiftMode::Quadrature),
        t1(ShiftMode::Exact),
    );
    assert!(exact <= quad && quad <= est, "{exact} {quad} {est}");
    assert_eq!(est, 2.0 * 2.0);
}
