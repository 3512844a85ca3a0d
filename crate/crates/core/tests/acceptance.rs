//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs without the libtest harness so the summary lines are
//! always visible.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ionbound::bounds::{self, BoundKind, BoundOptions, StateData};
use ionbound::cli::{self, RunSettings};
use ionbound::hydrogen::{self, HydrogenState, ShiftNorm};
use ionbound::kato::{self, ResolventBoundParams};
use ionbound::parallel::Execution;
use ionbound::pulse::Pulse;
use ionbound::quadrature::Integrator;
use ionbound::volkov::{
    self, GaugeFrame, GaugeTransform, SampledWave, ShiftOptions, VolkovKernelParams,
};

/// Collects named checks for one criterion.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    passed: usize,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(what());
        }
    }

    fn close(&mut self, label: &str, a: f64, b: f64, tol: f64) {
        let d = (a - b).abs();
        self.check(d <= tol, || {
            format!("{label}: |{a} - {b}| = {d:e} > {tol:e}")
        });
    }

    fn within_time(&mut self, label: &str, elapsed: Duration, limit: Duration) {
        self.check(elapsed < limit, || {
            format!("{label}: took {elapsed:?}, limit {limit:?}")
        });
    }
}

type Criterion = (&'static str, fn(&mut Checks));

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 resolvent constant", criterion_1),
        ("2 first-term coefficient K(n,l)", criterion_2),
        ("3 shifted Coulomb integrals", criterion_3),
        ("4 hydrogen matrix elements", criterion_4),
        ("5 pulse integrals", criterion_5),
        ("6 figure 1 curves", criterion_6),
        ("7 figure 2 curve", criterion_7),
        ("8 no stabilization", criterion_8),
        ("9 Volkov kernels and gauge maps", criterion_9),
        ("10 bound logic", criterion_10),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let mut checks = Checks::default();
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&mut checks)));
        let elapsed = start.elapsed();
        if outcome.is_err() {
            checks.failures.push("panicked".into());
        }
        if checks.failures.is_empty() {
            println!(
                "PASS criterion {name} ({} checks, {elapsed:.2?})",
                checks.passed
            );
        } else {
            failed += 1;
            println!(
                "FAIL criterion {name} ({} passed, {} failed, {elapsed:.2?})",
                checks.passed,
                checks.failures.len()
            );
            for f in checks.failures.iter().take(10) {
                println!("    {f}");
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ground() -> StateData {
    StateData::hydrogen(&HydrogenState::ground())
}

fn criterion_1(c: &mut Checks) {
    let start = Instant::now();
    let opt = kato::optimize_resolvent_bound().unwrap();
    let elapsed = start.elapsed();
    let exact = kato::resolvent_constant_closed_form();
    let expected = 11.0 * PI.powf(7.0 / 11.0) / (2f64.powf(6.0 / 11.0) * 3f64.powf(9.0 / 11.0));
    c.close("closed form", exact, expected, 1e-15);
    c.close(
        "optimized vs closed form (relative)",
        opt.value / exact,
        1.0,
        1e-6,
    );
    c.close("value ≈ 6.3561", exact, 6.3561, 1e-4);
    c.within_time("optimizer", elapsed, Duration::from_secs(1));
    // the two-digit value is reported, and rounds down
    c.check(
        kato::ROUNDED_RESOLVENT_CONSTANT == 6.35 && kato::ROUNDED_RESOLVENT_CONSTANT < exact,
        || "rounded constant".into(),
    );
    let report = cli::constants_report(Execution::Parallel).unwrap();
    c.check(
        report.contains("6.35 ") && report.contains("6.3560992612"),
        || "constants report lists both values".into(),
    );
}

fn criterion_2(c: &mut Checks) {
    let k10 = kato::generic_first_term_coefficient(&HydrogenState::ground());
    c.close(
        "K(1,0) = C√8 + √2",
        k10,
        kato::resolvent_constant() * 8f64.sqrt() + SQRT_2,
        1e-12,
    );
    c.check((19.35..=19.40).contains(&k10), || {
        format!("K(1,0) = {k10} outside [19.35, 19.40]")
    });
    for n in 1..=50i64 {
        for l in 0..n {
            let k = kato::generic_first_term_coefficient(&HydrogenState::new(n, l, 0).unwrap());
            c.check(k <= 19.4, || format!("K({n},{l}) = {k} > 19.4"));
        }
    }
    let s50 = HydrogenState::new(50, 0, 0).unwrap();
    let k50 = kato::generic_first_term_coefficient(&s50);
    let target = kato::ROUNDED_RESOLVENT_CONSTANT + 0.006 + s50.coulomb_norm();
    c.close("K(50,0) near the large-n limit", k50, target, 0.05);
    // decreasing in n toward the constant
    let ks: Vec<f64> = (1..=50)
        .map(|n| kato::generic_first_term_coefficient(&HydrogenState::new(n, 0, 0).unwrap()))
        .collect();
    c.check(ks.windows(2).all(|w| w[1] < w[0]), || {
        "K(n,0) not decreasing".into()
    });
}

/// `N₂(c) = 2∫₀^∞ dρ ∫₋₁¹ dμ exp(−2√(ρ² + c² + 2ρcμ))`, centred on the
/// singular point instead of the nucleus: an independent oracle.
fn n2_oracle(cc: f64) -> f64 {
    let q = Integrator::new(1e-12, 1e-11);
    let inner = |rho: f64| {
        q.integrate(
            |mu| (-2.0 * (rho * rho + cc * cc + 2.0 * rho * cc * mu).max(0.0).sqrt()).exp(),
            -1.0,
            1.0,
        )
        .unwrap()
        .value
    };
    let near = q.integrate(inner, 0.0, cc).unwrap().value;
    let far = q.integrate_semi_infinite(inner, cc, 2.0).unwrap().value;
    2.0 * (near + far)
}

fn criterion_3(c: &mut Checks) {
    let start = Instant::now();
    let grid = [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0];
    let n1: Vec<f64> = grid
        .iter()
        .map(|&x| hydrogen::coulomb_mean_shifted(x).unwrap())
        .collect();
    let n2: Vec<f64> = grid
        .iter()
        .map(|&x| hydrogen::coulomb_sq_mean_shifted(x).unwrap())
        .collect();
    for i in 1..grid.len() {
        c.check(n1[i - 1] - n1[i] > 1e-9, || {
            format!("N1 not decreasing at c={}", grid[i])
        });
        c.check(n2[i - 1] - n2[i] > 1e-9, || {
            format!("N2 not decreasing at c={}", grid[i])
        });
    }
    c.close(
        "N1(0+)",
        hydrogen::coulomb_mean_shifted(1e-9).unwrap(),
        1.0,
        1e-8,
    );
    c.close(
        "N2(0+)",
        hydrogen::coulomb_sq_mean_shifted(1e-9).unwrap(),
        2.0,
        1e-8,
    );
    for (&x, &v) in grid.iter().zip(&n1) {
        c.close(
            &format!("N1 quadrature vs closed form, c={x}"),
            v,
            hydrogen::coulomb_mean_shifted_closed(x),
            1e-10,
        );
    }
    c.close(
        "N2(1) against 2-D oracle",
        hydrogen::coulomb_sq_mean_shifted(1.0).unwrap(),
        n2_oracle(1.0),
        1e-9,
    );

    let mut all = vec![0.0];
    all.extend_from_slice(&grid);
    for &x in &all {
        let est = hydrogen::shift_difference_norm(x, ShiftNorm::Estimate)
            .unwrap()
            .value;
        c.check(est <= 2.0, || format!("estimate {est} > 2 at c={x}"));
        if x > 0.0 {
            c.check(est < 2.0, || format!("estimate reaches 2 at c={x}"));
        }
    }
    c.within_time("runtime", start.elapsed(), Duration::from_secs(5));
}

fn criterion_4(c: &mut Checks) {
    let q = Integrator::new(1e-13, 1e-12);
    for n in 1..=5i64 {
        for l in 0..n {
            let s = HydrogenState::new(n, l, 0).unwrap();
            let e = s.energy();
            let quad = |f: &dyn Fn(f64) -> f64| s.radial_expectation(f, &q).unwrap();
            let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
            let cases = [
                ("<r^2>", quad(&|r| r * r), s.r2_mean()),
                ("<1/r>", quad(&|r| 1.0 / r), s.inv_r_mean()),
                ("<1/r^2>", quad(&|r| 1.0 / (r * r)), s.inv_r2_mean()),
                (
                    "||(2H0+1)psi||^2",
                    quad(&|r| (2.0 * e + 1.0 + 2.0 / r).powi(2)),
                    s.h0_shift_norm_sq(),
                ),
            ];
            for (name, got, want) in cases {
                c.check(rel(got, want) <= 1e-8, || {
                    format!("{name} at ({n},{l}): quadrature {got} vs {want}")
                });
            }
        }
    }
    c.check(HydrogenState::ground().h0_shift_norm_sq() == 8.0, || {
        "(1,0) value is not exactly 8".into()
    });
}

fn criterion_5(c: &mut Checks) {
    let pulses = [
        Pulse::cosine(10.0, 1.5, 2.0 * PI / 1.5).unwrap(),
        Pulse::cosine(10.0, 50.0, 8.0 * PI / 50.0).unwrap(),
        Pulse::cosine(0.3, 0.057, 200.0).unwrap(),
    ];
    for p in &pulses {
        let tau = p.duration();
        for k in 0..200 {
            let t = tau * k as f64 / 199.0;
            let b = p.momentum_transfer(t).unwrap();
            let cc = p.displacement(t).unwrap();
            c.close(
                &format!("b at t={t}"),
                p.momentum_transfer_by_quadrature(t).unwrap(),
                b,
                1e-10,
            );
            c.close(
                &format!("c at t={t}"),
                p.displacement_by_quadrature(t).unwrap(),
                cc,
                1e-10,
            );
            c.close(
                &format!("c by moment at t={t}"),
                p.displacement_by_moment(t).unwrap(),
                p.displacement_by_quadrature(t).unwrap(),
                1e-9,
            );
        }
    }
    let others = [
        Pulse::cosine_ramped(5.0, 1.5, 1.0, 12.0).unwrap(),
        Pulse::constant(0.7, 3.0).unwrap(),
        Pulse::tabulated(vec![(0.0, 0.0), (0.5, 1.0), (1.5, -0.5), (2.0, 0.25)], 2.0).unwrap(),
    ];
    for p in &others {
        let tau = p.duration();
        for k in 0..50 {
            let t = tau * k as f64 / 49.0;
            c.close(
                &format!("{:?} moment identity at t={t}", p.shape()),
                p.displacement_by_moment(t).unwrap(),
                p.displacement_by_quadrature(t).unwrap(),
                1e-9,
            );
        }
    }
    for (e0, omega) in [(10.0, 1.5), (10.0, 50.0), (1.0, 0.057)] {
        for n in 1..=4 {
            let p = Pulse::cosine_cycles(e0, omega, n as f64).unwrap();
            let tau = p.duration();
            let b = p.momentum_transfer(tau).unwrap();
            let cc = p.displacement(tau).unwrap();
            c.check(b.abs() < 1e-10, || {
                format!("|b| = {b:e} after {n} cycles at ω={omega}")
            });
            c.check(cc.abs() < 1e-10, || {
                format!("|c| = {cc:e} after {n} cycles at ω={omega}")
            });
        }
    }
}

fn criterion_6(c: &mut Checks) {
    let start = Instant::now();
    let fig = cli::figure1(&RunSettings::default()).unwrap();
    c.within_time("runtime", start.elapsed(), Duration::from_secs(2));
    let n = fig.taus.len();
    c.check(n >= 400, || format!("only {n} points"));
    let csv = fig.to_csv();
    c.check(csv.lines().count() == n + 1, || "CSV row count".into());

    // (a) upper curves vanish at 0 and at the end of the cycle
    for &e0 in &cli::FIGURE1_FIELDS {
        let up = fig.series(BoundKind::Upper2, e0).unwrap();
        for i in [0, n - 1] {
            let v = up.reports[i].raw.unwrap();
            c.check(v.abs() < 1e-12, || {
                format!("upper E0={e0} at tau={} is {v:e}", fig.taus[i])
            });
        }
    }

    // (b) lower bound valid exactly where b² > 1; the valid set is interior
    // (not at the cycle ends or at the half-cycle point, where b = 0)
    let half = (n - 1) / 2;
    for &e0 in &cli::FIGURE1_FIELDS {
        let low = fig.series(BoundKind::Lower, e0).unwrap();
        for (i, &tau) in fig.taus.iter().enumerate() {
            let b = Pulse::cosine(e0, fig.omega, tau)
                .unwrap()
                .momentum_transfer(tau)
                .unwrap();
            c.check(low.reports[i].valid == (b * b > 1.0), || {
                format!(
                    "E0={e0} tau={tau}: valid={} but b²={}",
                    low.reports[i].valid,
                    b * b
                )
            });
        }
        for i in [0, half, n - 1] {
            c.check(!low.reports[i].valid, || {
                format!("E0={e0}: lower valid at boundary index {i}")
            });
        }
        c.check(low.reports.iter().any(|r| r.valid), || {
            format!("E0={e0}: lower never valid")
        });
    }

    // (c) no crossing: clipped lower curves ordered in E0 (invalid = trivial 0)
    let clipped = |e0: f64| -> Vec<f64> {
        fig.series(BoundKind::Lower, e0)
            .unwrap()
            .clipped()
            .into_iter()
            .map(|v| v.unwrap_or(0.0))
            .collect()
    };
    let (l5, l10, l20) = (clipped(5.0), clipped(10.0), clipped(20.0));
    for i in 0..n {
        c.check(l5[i] <= l10[i] && l10[i] <= l20[i], || {
            format!(
                "crossing at tau={}: {} {} {}",
                fig.taus[i], l5[i], l10[i], l20[i]
            )
        });
    }

    // (d) spot value at ωτ = π/2 (grid index (n−1)/4)
    let quarter = (n - 1) / 4;
    c.close(
        "grid hits ωτ = π/2",
        fig.taus[quarter] * fig.omega,
        FRAC_PI_2,
        1e-12,
    );
    let v = fig.series(BoundKind::Lower, 20.0).unwrap().reports[quarter]
        .clipped
        .unwrap();
    c.close("lower(E0=20, ωτ=π/2)", v, 0.98796, 1e-4);
}

fn criterion_7(c: &mut Checks) {
    let fig = cli::figure2(&RunSettings::default()).unwrap();
    let n = fig.taus.len();
    c.check(n >= 400, || format!("only {n} points"));
    c.close("end of grid", fig.taus[n - 1], 8.0 * PI / 50.0, 1e-15);
    let up = fig.series(BoundKind::Upper2, cli::FIGURE2_FIELD).unwrap();
    let raw: Vec<f64> = up.raw().into_iter().map(Option::unwrap).collect();
    let clipped: Vec<f64> = up.clipped().into_iter().map(Option::unwrap).collect();
    c.close("tau = 0", clipped[0], 0.0, 1e-15);

    let state = ground();
    let opts = BoundOptions::default();
    let spot =
        bounds::upper_bound_2(&Pulse::cosine(10.0, 50.0, 0.1).unwrap(), &state, opts).unwrap();
    c.close("upper(tau = 0.1)", spot.clipped.unwrap(), 0.1549, 1e-3);

    let first_one = clipped.iter().position(|&v| v >= 1.0);
    c.check(first_one.is_some_and(|i| fig.taus[i] < 0.5), || {
        format!("first clip to 1 at {:?}", first_one.map(|i| fig.taus[i]))
    });

    // integer cycles fall on grid indices 100, 200, 300, 400
    for cycle in 1..=4 {
        let i = cycle * (n - 1) / 4;
        c.close(
            &format!("grid hits cycle {cycle}"),
            fig.taus[i],
            2.0 * PI * cycle as f64 / 50.0,
            1e-12,
        );
        let left = raw[i - 1] > raw[i];
        let right = i + 1 >= n || raw[i + 1] > raw[i];
        c.check(left && right, || {
            format!("raw not a local minimum at cycle {cycle}")
        });
    }
}

fn criterion_8(c: &mut Checks) {
    let state = ground();
    let omega = 1.5;
    let tau = FRAC_PI_2 / omega;
    let dropped = BoundOptions::default().drop_spreading(true);
    let full = BoundOptions::default();
    let fields = [5.0, 10.0, 20.0, 40.0, 80.0, 160.0];
    let floor = 1.0 - (tau * 2.0).powi(2) * 1.01;
    let mut last = f64::NEG_INFINITY;
    let mut last_gap = f64::INFINITY;
    for e0 in fields {
        let p = Pulse::cosine(e0, omega, tau).unwrap();
        let low = bounds::lower_bound(&p, &state, dropped)
            .unwrap()
            .raw
            .unwrap();
        c.check(low > last, || {
            format!("lower not increasing at E0={e0}: {low} <= {last}")
        });
        c.check(low > floor, || {
            format!("lower {low} below floor {floor} at E0={e0}")
        });
        last = low;
        // keeping the spreading term, the bound climbs toward 1 − (2τ)²
        let with = bounds::lower_bound(&p, &state, full).unwrap().raw.unwrap();
        let limit = 1.0 - (2.0 * tau).powi(2);
        c.check(with <= limit, || {
            format!("E0={e0}: {with} above the limit {limit}")
        });
        let gap = limit - with;
        c.check(gap < last_gap, || {
            format!("E0={e0}: gap to the limit not shrinking")
        });
        last_gap = gap;
    }
    c.check(1.0 - last < 1e-3, || {
        format!("lower at E0=160 is {last}, not near 1")
    });
    c.close(
        "stabilization floor helper",
        bounds::stabilization_floor(&state, 0.1),
        1.0 - 0.2f64.powi(2),
        1e-15,
    );
}

fn criterion_9(c: &mut Checks) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let pulse = Pulse::cosine(3.0, 1.5, 10.0).unwrap();
    for _ in 0..100 {
        let t: f64 = rng.gen_range(0.0..10.0);
        let tp: f64 = rng.gen_range(0.0..10.0);
        if (t - tp).abs() < 1e-3 {
            continue;
        }
        let x: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-5.0..5.0));
        let xp: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-5.0..5.0));
        let p = VolkovKernelParams::from_pulse(&pulse, t, tp).unwrap();
        let direct = volkov::volkov_kernel(GaugeFrame::Length, &p, x, xp).unwrap();
        // T(t) K₀ T(t′)⁻¹ along z, free along x and y
        let at = GaugeTransform::kramers_henneberger(p.a_t, p.b_t, p.c_t);
        let atp = GaugeTransform::kramers_henneberger(p.a_tp, p.b_tp, p.c_tp);
        let along_z = volkov::conjugate_kernel_1d(
            &at,
            &atp,
            |z, zp| volkov::free_kernel_1d(z, t, zp, tp),
            x[2],
            xp[2],
        )
        .unwrap();
        let transverse = volkov::free_kernel_1d(x[0], t, xp[0], tp).unwrap()
            * volkov::free_kernel_1d(x[1], t, xp[1], tp).unwrap();
        let composed = along_z * transverse;
        let rel = (direct - composed).norm() / direct.norm();
        c.check(rel < 1e-9, || {
            format!("KH identity at t={t} t'={tp}: rel {rel:e}")
        });

        // length / velocity ratio is the pure b-phase
        let vel = volkov::volkov_kernel(GaugeFrame::Velocity, &p, x, xp).unwrap();
        let expected = Complex64::from_polar(1.0, p.b_tp * xp[2] - p.b_t * x[2]);
        let rel = (direct / vel - expected).norm();
        c.check(rel < 1e-12, || {
            format!("length/velocity ratio off by {rel:e}")
        });
    }

    // semigroup: propagating a Gaussian 0 → t₁ → t₂ matches 0 → t₂
    let q = Integrator::new(1e-12, 1e-10);
    let (t1, t2) = (0.7, 1.6);
    for z in [-1.5, 0.0, 0.4, 2.2] {
        let two_step = volkov::propagate_1d(
            |z, zp| volkov::free_kernel_1d(z, t2, zp, t1),
            |zp| volkov::free_gaussian(zp, t1),
            z,
            (-25.0, 25.0),
            &q,
        )
        .unwrap();
        let err = (two_step - volkov::free_gaussian(z, t2)).norm();
        c.check(err < 1e-6, || format!("semigroup at z={z}: {err:e}"));
    }

    // KH round trip on a grid, commensurate and interpolated shifts
    let wave = SampledWave::sample(-30.0, 30.0, 1201, |z| {
        Complex64::new((-z * z / 2.0).exp(), 0.3 * z * (-z * z / 2.0).exp())
    })
    .unwrap();
    let opts = ShiftOptions::default();
    for (b, cc, a) in [(1.3, 20.0 * wave.dz, 0.4), (-2.0, 3.37, 1.1)] {
        let fwd = volkov::kh_transform(&wave, b, cc, a, false, opts).unwrap();
        let back = volkov::kh_transform(&fwd.wave, b, cc, a, true, opts).unwrap();
        let err = back
            .wave
            .values
            .iter()
            .zip(&wave.values)
            .map(|(u, v)| (u - v).norm())
            .fold(0.0, f64::max);
        c.check(err < 1e-12, || format!("round trip (c={cc}) error {err:e}"));
    }
    c.within_time("runtime", start.elapsed(), Duration::from_secs(5));
}

fn random_pulse(rng: &mut ChaCha8Rng) -> Pulse {
    let e0 = rng.gen_range(-20.0..20.0);
    let omega = rng.gen_range(0.05..60.0);
    let tau = rng.gen_range(0.0..6.0);
    match rng.gen_range(0..5) {
        0 | 1 => Pulse::cosine(e0, omega, tau).unwrap(),
        2 => {
            let ramp = rng.gen_range(0.5..2.0);
            Pulse::cosine_ramped(e0, omega, ramp, 2.0 * ramp * 2.0 * PI / omega + tau).unwrap()
        }
        3 => Pulse::constant(e0, tau).unwrap(),
        _ => {
            let samples = (0..8)
                .map(|k| ((tau + 0.1) * (k as f64 / 7.0), rng.gen_range(-10.0..10.0)))
                .collect();
            Pulse::tabulated(samples, tau + 0.1).unwrap()
        }
    }
}

fn criterion_10(c: &mut Checks) {
    let state = ground();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut pulses: Vec<Pulse> = (0..100).map(|_| random_pulse(&mut rng)).collect();
    // the validity boundary itself: b²/2 equal to the ionization energy
    pulses.push(Pulse::delta_kick(1.0).unwrap());
    pulses.push(Pulse::delta_kick(2.0).unwrap());
    for p in &pulses {
        for opts in [
            BoundOptions::default(),
            BoundOptions::default().drop_spreading(true),
        ] {
            let all = bounds::all_bounds(p, &state, opts).unwrap();
            let (u1, u2, low, pf, pert) = (&all[0], &all[1], &all[2], &all[3], &all[4]);
            c.check(!(u1.valid && low.valid), || {
                format!("upper1 and lower both valid for {:?}", p.shape())
            });
            c.check(
                u1.term("T1") == u2.term("T1") && u1.term("T2") == u2.term("T2"),
                || format!("T1/T2 differ for {:?}", p.shape()),
            );
            let (pr, pf_raw) = (pert.raw.unwrap(), pf.raw.unwrap());
            c.check(pr <= pf_raw * (1.0 + 1e-12) + 1e-15, || {
                format!("pert1 {pr} > pfeifer {pf_raw} for {:?}", p.shape())
            });
            // the separate entry points agree with the combined one
            let single = bounds::upper_bound_1(p, &state, opts).unwrap();
            c.check(&single == u1, || {
                "upper_bound_1 differs from all_bounds".into()
            });
            let single = bounds::upper_bound_2(p, &state, opts).unwrap();
            c.check(
                single.term("T1") == u1.term("T1") && single.term("T2") == u1.term("T2"),
                || "separately computed T1/T2 differ".into(),
            );
        }
    }
    // sanity on the resolvent optimum: no sampled point undercuts it
    let samples: Vec<ResolventBoundParams> = (0..10_000)
        .map(|_| {
            ResolventBoundParams::new(rng.gen_range(0.01..5.0), rng.gen_range(0.01..5.0)).unwrap()
        })
        .collect();
    let excess = kato::min_excess_over(&samples, kato::resolvent_constant(), Execution::Parallel);
    c.check(excess >= -1e-9, || {
        format!("sampled resolvent bound below optimum by {excess:e}")
    });
}
