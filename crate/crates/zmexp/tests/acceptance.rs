//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with the measured quantity (visible with `--nocapture`).
//!
//! Expected values tagged as derived were computed with independent
//! oracles (plain bisection implemented here, or high-precision
//! arithmetic) and frozen; the tests never re-derive them from the code
//! paths they check.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{E, PI};
use std::time::Instant;

use zmexp::dynamics::{classify_dynamical_point, DynamicalClass, IterationPolicy, MapParams};
use zmexp::param::{
    c0_bounds, classify_parameter, gamma_curve, polynomial_like_margin, r_const, CaptureCertificate,
    ParamClass,
};
use zmexp::regions::{epsilon0_lower_bound, sigma_curve, solve_epsilon0, RegionCertificates};
use zmexp::render::{colorize, encode_ppm, render_dynamical, GridSpec, Palette};
use zmexp::verify::{run_suite, Corruption, LambdaGridSpec, SuiteConfig};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Independent root oracle: plain interval halving, no shared code with
/// the library solvers.
fn oracle_bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The shared 20-point (lambda, m) sample: log-spaced moduli with seeded
/// arguments, m cycling through {2,3,4,5}.
fn parameter_sample() -> Vec<(Complex64, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (lo, hi) = (0.05f64.ln(), 20f64.ln());
    (0..20)
        .map(|i| {
            let r = (lo + (hi - lo) * i as f64 / 19.0).exp();
            let arg = rng.random_range(-PI..PI);
            (Complex64::from_polar(r, arg), [2u32, 3, 4, 5][i % 4])
        })
        .collect()
}

#[test]
fn criterion_01_epsilon0_solver() {
    let tol_exact = 1e-12;
    let e0 = solve_epsilon0(1.0 / E, 2, 1e-12).unwrap();
    let err_exact = (e0 - 1.0).abs();
    assert!(err_exact < tol_exact, "epsilon0(1/e,2) off by {err_exact}");

    let oracle = oracle_bisect(|x| x * x.exp() - 1.0, 0.0, 1.0);
    let e0 = solve_epsilon0(1.0, 2, 1e-12).unwrap();
    let err_oracle = (e0 - oracle).abs();
    assert!(err_oracle < 1e-9, "epsilon0(1,2) vs oracle: {err_oracle}");
    assert!((e0 - 0.567_143_290_4).abs() < 1e-9);

    let start = Instant::now();
    let n = 1000;
    for i in 0..n {
        let al = 0.01 + f64::from(i) * 0.37;
        std::hint::black_box(solve_epsilon0(al, 2 + (i % 7) as u32, 1e-12).unwrap());
    }
    let per_solve = start.elapsed().as_secs_f64() / f64::from(n);
    assert!(
        per_solve < 1e-3,
        "solver took {per_solve:.2e} s per call, budget 1 ms"
    );
    println!(
        "criterion 01 (epsilon0 solver): PASS - exact err {err_exact:.2e}, oracle err {err_oracle:.2e}, {:.2} us/solve",
        per_solve * 1e6
    );
}

#[test]
fn criterion_02_lower_bound_on_grid() {
    let mut worst = f64::NEG_INFINITY;
    for i in 0..50 {
        let t = i as f64 / 49.0;
        let al = (1e-3f64.ln() + t * (1e3f64.ln() - 1e-3f64.ln())).exp();
        for m in 2..=8 {
            let e0 = solve_epsilon0(al, m, 1e-12).unwrap();
            worst = worst.max(epsilon0_lower_bound(al, m) - e0);
        }
    }
    assert!(worst <= 1e-12, "lower bound violated by {worst:.2e}");
    println!("criterion 02 (epsilon0 lower bound, 50x7 grid): PASS - worst slack deficit {worst:.2e}");
}

#[test]
fn criterion_03_trap_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut violations = 0u64;
    let mut worst = f64::NEG_INFINITY;
    for (lam, m) in parameter_sample() {
        let certs = RegionCertificates::compute(lam.norm(), m).unwrap();
        let p = MapParams::new(lam, m).unwrap();
        let radius = certs.epsilon0 * (1.0 - 1e-12);
        for _ in 0..10_000 {
            let z = Complex64::from_polar(
                radius * rng.random::<f64>().sqrt(),
                rng.random_range(-PI..PI),
            );
            let excess = p.eval(z).norm() - z.norm();
            worst = worst.max(excess);
            if excess > 0.0 {
                violations += 1;
            }
        }
    }
    assert_eq!(violations, 0, "trap contraction violated {violations} times");
    println!(
        "criterion 03 (trap invariance, 20 pairs x 1e4): PASS - zero violations, worst |F(z)|-|z| = {worst:.2e}"
    );
}

#[test]
fn criterion_04_wedge_maps_into_trap() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut violations = 0u64;
    let mut worst = f64::NEG_INFINITY;
    for (lam, m) in parameter_sample() {
        let certs = RegionCertificates::compute(lam.norm(), m).unwrap();
        let p = MapParams::new(lam, m).unwrap();
        for _ in 0..10_000 {
            let x = certs.x0 - 30.0 * rng.random::<f64>() - 1e-9;
            let cw = certs.half_width(x);
            if !(cw > 0.0) {
                continue;
            }
            let z = c(x, cw * (1.0 - 1e-12) * rng.random_range(-1.0..1.0));
            let excess = p.eval(z).norm() - certs.epsilon0;
            worst = worst.max(excess);
            if excess >= 1e-9 {
                violations += 1;
            }
        }
    }
    assert_eq!(violations, 0);
    println!(
        "criterion 04 (wedge maps into trap, 20 pairs x 1e4): PASS - zero violations, worst |F(z)|-eps0 = {worst:.2e}"
    );
}

#[test]
fn criterion_05_sigma_identity() {
    let configs = [(c(1.0, 0.0), 2u32), (c(0.45, 0.35), 5)];
    let mut worst_identity: f64 = 0.0;
    for (lam, m) in configs {
        let p = MapParams::new(lam, m).unwrap();
        let arg_lambda = lam.arg();
        for k in -6..=6 {
            let curve = sigma_curve(k, &p, 1000);
            for s in &curve.samples {
                let z = s.z();
                let image = p.eval(z);
                // Arg F is checked directly while F is representable;
                // overflowed/underflowed samples are checked through the
                // exact angular form of Arg F.
                let res = if image.is_finite() && image.norm() > 1e-290 {
                    zmexp::curves::circle_distance(image.arg(), PI)
                } else {
                    zmexp::curves::circle_distance(
                        arg_lambda + f64::from(m) * z.arg() + z.im,
                        PI,
                    )
                };
                worst_identity = worst_identity.max(res);
            }
        }
    }
    assert!(worst_identity < 1e-9, "identity residual {worst_identity:.2e}");
    println!(
        "criterion 05 (sigma curves, identity clause): PASS - |Arg F(z) - pi| <= {worst_identity:.2e} over 2x13 curves"
    );
}

/// Asymptote clause of criterion 05, implemented exactly as stated:
/// |Im(z) - ((2k+1) pi - Arg lambda)| < 0.05 at Re(z) = 100 for
/// k in [-6, 6].
///
/// This absolute bound cannot hold: along sigma_k the defining identity
/// forces Im(z) - L = -m Arg(z) with L = (2k+1) pi - Arg(lambda), so at
/// Re(z) = 100 the gap is m atan(|Im|/100), at least 0.0616 for the
/// k = 0 curve of lambda = 1, m = 2 and at least 0.665 for |k| = 6
/// whatever lambda is. The relative gap |Im - L|/|L| stays below 5%
/// over every tested curve, which is presumably what the threshold was
/// calibrated against; the test reports both and asserts the stated
/// absolute form.
#[test]
fn criterion_05_sigma_asymptote_at_re100() {
    let configs = [(c(1.0, 0.0), 2u32), (c(0.45, 0.35), 5)];
    let mut worst_abs: f64 = 0.0;
    let mut worst_rel: f64 = 0.0;
    for (lam, m) in configs {
        let arg_lambda = lam.arg();
        for k in -6..=6 {
            // Bisect the curve parameter for the point with Re(z) = 100.
            let line = f64::from(2 * k + 1) * PI - arg_lambda;
            let rho = |alpha: f64| {
                (f64::from(2 * k + 1) * PI - f64::from(m) * alpha - arg_lambda) / alpha.sin()
            };
            let re_at = |alpha: f64| rho(alpha) * alpha.cos();
            let side = if k >= 0 { 1.0 } else { -1.0 };
            let (mut near, mut far) = (side * 1e-9, side * 0.5);
            if re_at(near) < 100.0 {
                continue; // curve never reaches Re = 100 on this side
            }
            while re_at(far) > 100.0 {
                far *= 0.5;
            }
            for _ in 0..200 {
                let mid = 0.5 * (near + far);
                if re_at(mid) > 100.0 {
                    near = mid;
                } else {
                    far = mid;
                }
            }
            let alpha = 0.5 * (near + far);
            let im = rho(alpha) * alpha.sin();
            worst_abs = worst_abs.max((im - line).abs());
            worst_rel = worst_rel.max((im - line).abs() / line.abs());
        }
    }
    let verdict = if worst_abs < 0.05 { "PASS" } else { "FAIL" };
    println!(
        "criterion 05 (sigma curves, asymptote clause at Re=100): {verdict} - worst |Im - line| = {worst_abs:.4} (stated bound 0.05, unattainable; relative gap {:.2}% stays under 5%)",
        worst_rel * 100.0
    );
    assert!(
        worst_abs < 0.05,
        "asymptote gap at Re=100 is {worst_abs:.4}; the identity forces a gap of m*atan(|Im|/100) >= 0.0616, so the stated absolute bound 0.05 cannot be met (relative gap {:.2}%)",
        worst_rel * 100.0
    );
}

#[test]
fn criterion_06_fixed_point_and_multiplier() {
    let mut worst_fp: f64 = 0.0;
    let mut worst_mult: f64 = 0.0;
    for al in [0.5, 1.0, 2.0] {
        for m in [2u32, 3] {
            let certs = RegionCertificates::compute(al, m).unwrap();
            let p = MapParams::new(c(al, 0.0), m).unwrap();
            let fp = c(certs.epsilon0, 0.0);
            worst_fp = worst_fp.max((p.eval(fp) - fp).norm());
            let mult = p.derivative(fp);
            worst_mult = worst_mult.max((mult - c(f64::from(m) + certs.epsilon0, 0.0)).norm());
        }
    }
    assert!(worst_fp < 1e-9);
    assert!(worst_mult < 1e-8);
    println!(
        "criterion 06 (boundary fixed point): PASS - |F(eps0)-eps0| <= {worst_fp:.2e}, multiplier residual <= {worst_mult:.2e}"
    );
}

#[test]
fn criterion_07_inner_disk_capture() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pol = IterationPolicy::default();
    let mut checked = 0u64;
    for m in 2..=5 {
        let (inner, _) = c0_bounds(m);
        for _ in 0..1000 {
            let r = (inner * (1.0 - 1e-9) * rng.random::<f64>().sqrt()).max(inner * 1e-6);
            let lam = Complex64::from_polar(r, rng.random_range(-PI..PI));
            match classify_parameter(lam, m, &pol) {
                ParamClass::Captured {
                    first_trap_step,
                    certificate,
                } => {
                    assert!(first_trap_step <= 1, "m={m} lam={lam}: step {first_trap_step}");
                    assert_eq!(certificate, CaptureCertificate::TrapDisk);
                }
                other => panic!("m={m} lam={lam}: expected capture, got {other:?}"),
            }
            checked += 1;
        }
    }
    println!("criterion 07 (inner-disk capture, 4x1e3 parameters): PASS - {checked} captured with step <= 1");
}

#[test]
fn criterion_08_expansion_margin() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut min_margin = f64::INFINITY;
    for m in 2..=5u32 {
        let (_, outer) = c0_bounds(m);
        for _ in 0..1000 {
            let r = outer * 1.01 * 10f64.powf(rng.random::<f64>());
            let lam = Complex64::from_polar(r, rng.random_range(-PI..PI));
            let p = MapParams::new(lam, m).unwrap();
            min_margin = min_margin.min(polynomial_like_margin(&p, 4096));
        }
    }
    assert!(min_margin > 0.0, "margin dipped to {min_margin:.3e}");

    // Analytic spot check: m = 2, lambda = 3 has min |F| = 3/e on |z| = 1.
    let p = MapParams::new(c(3.0, 0.0), 2).unwrap();
    let min_f = polynomial_like_margin(&p, 4096) + 1.0;
    let err = (min_f - 3.0 / E).abs();
    assert!(err < 1e-6, "min |F| = {min_f}, expected 3/e, err {err:.2e}");
    println!(
        "criterion 08 (expansion margin, 4x1e3 parameters at 4096 samples): PASS - min margin {min_margin:.4}, spot-check err {err:.2e}"
    );
}

#[test]
fn criterion_09_gamma_curves() {
    let mut worst: f64 = 0.0;
    for m in [2u32, 3, 4] {
        let rm = r_const(m);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        for k in -6..=6 {
            let curve = gamma_curve(k, m, 1000);
            for s in &curve.samples {
                let lambda = s.z();
                let w = lambda * (sign / rm);
                worst = worst.max(zmexp::curves::circle_distance(
                    lambda.arg() + f64::from(m) * w.arg() + w.im,
                    PI,
                ));
            }
        }
    }
    assert!(worst < 1e-9, "congruence residual {worst:.2e}");

    // m = 3: the horseshoe curve crosses the positive real axis at
    // (m+1) r_m = 4 (e/3)^3.
    let crossing = 4.0 * r_const(3);
    let curve = gamma_curve(1, 3, 50_001);
    let s = curve
        .samples
        .iter()
        .min_by(|a, b| a.angle.abs().total_cmp(&b.angle.abs()))
        .unwrap();
    let err = (s.re - crossing).abs();
    assert!(
        err < 1e-6,
        "real-axis crossing {} vs {crossing}, err {err:.2e}",
        s.re
    );
    assert!(s.im.abs() < 1e-3);
    println!(
        "criterion 09 (gamma curves): PASS - congruence residual {worst:.2e}, m=3 crossing err {err:.2e}"
    );
}

/// Measures maximal runs of consecutive `Basin0` verdicts along a
/// vertical scan line, in plane units. Only runs fully interior to the
/// scan window count.
fn basin_runs(re: f64, im_max: f64, samples: usize, p: &MapParams) -> Vec<f64> {
    let certs = RegionCertificates::for_params(p).unwrap();
    let pol = IterationPolicy::default();
    let dy = im_max / samples as f64;
    let mut runs = Vec::new();
    let mut start: Option<usize> = None;
    for i in 0..samples {
        let z = c(re, (i as f64 + 0.5) * dy);
        let basin = classify_dynamical_point(z, p, &pol, &certs) == DynamicalClass::Basin0;
        match (basin, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if s > 0 {
                    runs.push((i - s) as f64 * dy);
                }
                start = None;
            }
            _ => {}
        }
    }
    runs
}

#[test]
fn criterion_10_dynamical_strip_width() {
    // Strip cross sections converge to pi from below as Re grows; at
    // Re = 30 the high strips are within sampling error of pi while the
    // lowest ones still carry the O(m Re / |z|^2) angular deficit.
    let p = MapParams::new(c(1.0, 0.0), 2).unwrap();
    let runs = basin_runs(30.0, 40.0 * PI, 4000, &p);
    assert!(runs.len() >= 8, "only {} complete runs measured", runs.len());
    let tail = &runs[runs.len() - 5..];
    let mut worst_rel: f64 = 0.0;
    for w in tail {
        worst_rel = worst_rel.max((w - PI).abs() / PI);
    }
    assert!(
        worst_rel < 0.05,
        "top strips deviate {:.2}% from pi: {tail:?}",
        worst_rel * 100.0
    );
    println!(
        "criterion 10 (dynamical strip width at Re=30): PASS - {} runs, top-5 widths {:?}, worst deviation {:.2}%",
        runs.len(),
        tail.iter().map(|w| (w * 1000.0).round() / 1000.0).collect::<Vec<_>>(),
        worst_rel * 100.0
    );
}

/// Captured interval of the k = 0 strip along Re(lambda) = 40, measured
/// at 4000 samples and compared to the asymptotic width r_2 pi with the
/// stated 5% tolerance.
///
/// The stated tolerance cannot hold at Re(lambda) = 40: the capture
/// band there is bounded by (m+1) Arg(lambda) + Im(lambda)/r_m crossing
/// an interval of length pi, so its width is pi divided by
/// 1/r_m + (m+1) Re(lambda)/|lambda|^2, about 12% below r_2 pi. The
/// deficit decays like (m+1) r_m / Re(lambda); 5% needs
/// Re(lambda) >= ~105 for k = 0. The test implements the criterion as
/// stated and reports the measurement.
#[test]
fn criterion_11_parameter_strip_width() {
    let m = 2u32;
    let pol = IterationPolicy::default();
    let rm = r_const(m);
    let target = rm * PI;
    let mid = rm * PI; // strip center for k = 0
    let im_max = 2.0 * target;
    let samples = 4000;
    let dy = im_max / samples as f64;

    let captured: Vec<bool> = (0..samples)
        .map(|i| {
            let lam = c(40.0, (i as f64 + 0.5) * dy);
            classify_parameter(lam, m, &pol).is_captured()
        })
        .collect();
    let mid_idx = (mid / dy) as usize;
    assert!(captured[mid_idx], "mid-strip parameter must be captured");
    let mut lo = mid_idx;
    while lo > 0 && captured[lo - 1] {
        lo -= 1;
    }
    let mut hi = mid_idx;
    while hi + 1 < samples && captured[hi + 1] {
        hi += 1;
    }
    let width = (hi - lo + 1) as f64 * dy;
    let rel = (width - target).abs() / target;
    let line = format!(
        "criterion 11 (parameter strip width at Re=40): measured {width:.4}, asymptotic r_2 pi = {target:.4}, deviation {:.2}%",
        rel * 100.0
    );
    if rel < 0.05 {
        println!("{line} - PASS");
    } else {
        println!("{line} - FAIL");
    }
    assert!(
        rel < 0.05,
        "captured width {width:.4} deviates {:.2}% from r_2 pi = {target:.4} (tolerance 5%)",
        rel * 100.0
    );
}

#[test]
fn criterion_12_renderer_determinism_and_speed() {
    let spec = GridSpec::square(-10.0, 10.0, 1024).unwrap();
    let p = MapParams::new(c(-2.1, 0.0), 2).unwrap();
    let pol = IterationPolicy::default();

    let start = Instant::now();
    let g4 = render_dynamical(&spec, &p, &pol, 4).unwrap();
    let elapsed = start.elapsed().as_secs_f64();

    let g1 = render_dynamical(&spec, &p, &pol, 1).unwrap();
    let g16 = render_dynamical(&spec, &p, &pol, 16).unwrap();
    assert_eq!(g1.cells, g4.cells, "1 vs 4 tiles");
    assert_eq!(g1.cells, g16.cells, "1 vs 16 tiles");

    let palette = Palette::default();
    let mut bytes1 = Vec::new();
    let mut bytes16 = Vec::new();
    encode_ppm(&colorize(&g1, &palette), &mut bytes1).unwrap();
    encode_ppm(&colorize(&g16, &palette), &mut bytes16).unwrap();
    assert_eq!(bytes1, bytes16, "encoded bytes differ across tilings");

    assert!(
        elapsed < 10.0,
        "1024^2 render with 4 workers took {elapsed:.2} s, budget 10 s"
    );
    println!(
        "criterion 12 (renderer determinism + speed): PASS - byte-identical across 1/4/16 tiles, 4-worker render {elapsed:.2} s"
    );
}

#[test]
fn criterion_13_negative_control() {
    let cfg = SuiteConfig {
        m_set: vec![2, 3, 4, 5],
        lambda_grid: LambdaGridSpec {
            count: 8,
            min_abs: 0.05,
            max_abs: 20.0,
        },
        seed: 13,
        corruption: Corruption {
            epsilon0_scale: 1.5,
            ..Corruption::default()
        },
    };
    let report = run_suite(&cfg).unwrap();
    let contraction = report
        .entries
        .iter()
        .find(|e| e.id == "trap.contraction")
        .expect("trap.contraction entry present");
    assert!(
        !contraction.pass,
        "corrupted trap radius must fail the contraction check"
    );
    assert!(!report.all_pass());
    println!(
        "criterion 13 (negative control): PASS - eps0 x1.5 makes trap.contraction fail (residual {:.3e})",
        contraction.worst_residual
    );
}

/// Renderer scaling is a performance target, not a correctness
/// criterion; it needs at least 8 physical cores to be meaningful.
/// Run explicitly with `cargo test --test acceptance -- --ignored`.
#[test]
#[ignore]
fn renderer_scaling_performance_target() {
    let spec = GridSpec::square(-10.0, 10.0, 1024).unwrap();
    let p = MapParams::new(c(-2.1, 0.0), 2).unwrap();
    let pol = IterationPolicy::default();

    let start = Instant::now();
    let _ = render_dynamical(&spec, &p, &pol, 1).unwrap();
    let t1 = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let _ = render_dynamical(&spec, &p, &pol, 8).unwrap();
    let t8 = start.elapsed().as_secs_f64();

    println!("renderer scaling: 1 worker {t1:.2} s, 8 workers {t8:.2} s, ratio {:.2}", t8 / t1);
    assert!(t8 <= 0.25 * t1, "8-worker time {t8:.2}s exceeds 0.25x single-worker {t1:.2}s");
}
