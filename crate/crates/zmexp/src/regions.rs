//! Certified subsets of the basin of attraction of z = 0.
//!
//! For a fixed (|lambda|, m) the basin contains three kinds of regions
//! that admit finite certificates:
//!
//! * the trap disk of radius `epsilon0`, forward invariant by a
//!   Schwarz-lemma contraction bound;
//! * the wedge `H` around the negative real axis, `{x < x0, |y| < C(x)}`,
//!   which maps into the trap disk in one step;
//! * horizontal strips around the preimage curves `sigma_k` of the
//!   negative real axis, which map into `H`.
//!
//! `epsilon0` is the unique positive root of `x^{m-1} e^x = 1/|lambda|`
//! and `x0 <= -m` is where the real axis starts mapping into the trap
//! disk. Both roots come from bracketed bisection driven to the floating
//! point fixpoint; the stored `tol` is the acceptance bound on the
//! defining residuals, checked after solving.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI};

use crate::curves::{CurveKind, CurvePolyline, CurveSample};
use crate::dynamics::MapParams;
use crate::error::{Error, Result};

/// Default acceptance bound on the relative residual of the defining
/// equations. Roots sit one step upstream of the curve identities, so
/// they get the tighter default.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Inset applied at the ends of every angular sampling interval, keeping
/// `sin(alpha)` away from its zeros.
pub const ANGLE_INSET: f64 = 1e-6;

/// h(x) = x^m e^x.
///
/// Increasing on (0, +inf). On the negative axis |h| peaks at x = -m
/// with |h(-m)| = (m/e)^m and |h| is increasing on (-inf, -m).
/// Underflows gracefully to 0 as x -> -inf.
pub fn h_aux(x: f64, m: u32) -> f64 {
    x.powi(m as i32) * x.exp()
}

/// Unique positive root of x^{m-1} e^x = 1/abs_lambda.
///
/// The left side is increasing from 0 to +inf on (0, +inf), so a
/// geometric upper bracket plus bisection converges unconditionally.
/// Bisection runs to the floating point fixpoint and the relative
/// residual is then verified against `tol`.
pub fn solve_epsilon0(abs_lambda: f64, m: u32, tol: f64) -> Result<f64> {
    if !(abs_lambda > 0.0) || !abs_lambda.is_finite() {
        return Err(Error::Domain(format!(
            "abs_lambda must be positive and finite, got {abs_lambda}"
        )));
    }
    if m < 2 {
        return Err(Error::Domain(format!("m must be >= 2, got {m}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }

    let target = 1.0 / abs_lambda;
    let g = |x: f64| x.powi(m as i32 - 1) * x.exp() - target;

    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    let mut grow = 0;
    while g(hi) < 0.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 2000 {
            return Err(Error::Domain(format!(
                "upper bracket for epsilon0 did not close (abs_lambda = {abs_lambda}, m = {m})"
            )));
        }
    }

    let root = bisect_to_fixpoint(g, lo, hi);
    let residual = (root.powi(m as i32 - 1) * root.exp() * abs_lambda - 1.0).abs();
    if residual > tol {
        return Err(Error::Domain(format!(
            "epsilon0 residual {residual:.3e} exceeds tol {tol:.3e} (abs_lambda = {abs_lambda}, m = {m})"
        )));
    }
    let _ = &mut lo;
    Ok(root)
}

/// Closed-form lower bound min(1, (1/(abs_lambda e))^{1/(m-1)}) for the
/// trap radius.
pub fn epsilon0_lower_bound(abs_lambda: f64, m: u32) -> f64 {
    let branch = (1.0 / (abs_lambda * E)).powf(1.0 / (f64::from(m) - 1.0));
    branch.min(1.0)
}

/// The abscissa x0 <= -m below which the real axis maps into the trap
/// disk.
///
/// If |h(-m)| = (m/e)^m already fits under epsilon0/abs_lambda the whole
/// ray (-inf, -m] qualifies and x0 = -m. Otherwise x0 is the unique root
/// of |h(x)| = epsilon0/abs_lambda on (-inf, -m), found by bisection on
/// the monotone |h|.
pub fn solve_x0(abs_lambda: f64, m: u32, epsilon0: f64) -> f64 {
    let ratio = epsilon0 / abs_lambda;
    let m_f = f64::from(m);
    let peak = (m_f / E).powi(m as i32);
    if peak <= ratio {
        return -m_f;
    }

    let h_abs = |x: f64| x.abs().powi(m as i32) * x.exp();
    let mut lo = -2.0 * m_f;
    while h_abs(lo) >= ratio {
        lo *= 2.0;
        if lo < -1e308 {
            break;
        }
    }
    // |h| increases from ~0 at lo toward (m/e)^m at -m.
    bisect_to_fixpoint(|x| h_abs(x) - ratio, lo, -m_f)
}

/// Bisection on a bracketed sign change, run until the interval has no
/// representable interior point. `f(lo) <= 0 <= f(hi)` is assumed.
fn bisect_to_fixpoint(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The derived quantities certifying basin membership for one
/// (|lambda|, m) pair.
///
/// Fields are public so that verification harnesses can corrupt them
/// deliberately (negative controls); values built by [`compute`] satisfy
/// the defining equations within `tol`.
///
/// [`compute`]: RegionCertificates::compute
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionCertificates {
    pub abs_lambda: f64,
    pub m: u32,
    pub epsilon0: f64,
    pub x0: f64,
    pub tol: f64,
}

impl RegionCertificates {
    pub fn compute(abs_lambda: f64, m: u32) -> Result<Self> {
        Self::with_tolerance(abs_lambda, m, DEFAULT_ROOT_TOL)
    }

    pub fn with_tolerance(abs_lambda: f64, m: u32, tol: f64) -> Result<Self> {
        let epsilon0 = solve_epsilon0(abs_lambda, m, tol)?;
        let x0 = solve_x0(abs_lambda, m, epsilon0);
        Ok(Self {
            abs_lambda,
            m,
            epsilon0,
            x0,
            tol,
        })
    }

    pub fn for_params(p: &MapParams) -> Result<Self> {
        Self::compute(p.lambda().norm(), p.m())
    }

    /// Half-width C(x) of the wedge at abscissa x:
    /// sqrt((epsilon0/|lambda|)^{2/m} e^{-2x/m} - x^2), clamped to 0
    /// where the radicand is negative so that membership simply fails.
    pub fn half_width(&self, x: f64) -> f64 {
        let m = f64::from(self.m);
        let ratio = self.epsilon0 / self.abs_lambda;
        let radicand = ratio.powf(2.0 / m) * (-2.0 * x / m).exp() - x * x;
        if radicand > 0.0 {
            radicand.sqrt()
        } else {
            0.0
        }
    }

    /// Strict interior membership in the wedge H.
    pub fn contains_h(&self, z: Complex64) -> bool {
        z.re < self.x0 && z.im.abs() < self.half_width(z.re)
    }

    /// Relative residual of the defining equation for epsilon0.
    pub fn defining_residual(&self) -> f64 {
        (self.epsilon0.powi(self.m as i32 - 1) * self.epsilon0.exp() * self.abs_lambda - 1.0).abs()
    }
}

/// Asymptotic cross-section of the preimage strip with index k: the
/// center line Im(z) = (2k+1) pi - Arg(lambda) and half-width pi/2.
pub fn strip_bounds(k: i32, p: &MapParams) -> (f64, f64) {
    let center = f64::from(2 * k + 1) * PI - p.lambda().arg();
    (center, PI / 2.0)
}

/// Samples the preimage curve sigma_k of the negative real axis.
///
/// In polar form z = rho e^{i alpha} the preimage condition
/// Arg(lambda) + m alpha + rho sin(alpha) = (2k+1) pi solves to
/// rho(alpha) = ((2k+1) pi - m alpha - Arg(lambda)) / sin(alpha).
/// The admissible alpha ranges depend on k and the parity of m; ranges
/// are sampled uniformly with a small end inset and samples with
/// rho <= 0 (or non-finite rho at a removable singularity) are dropped.
/// An empty intersection yields an empty polyline, not an error.
pub fn sigma_curve(k: i32, p: &MapParams, alpha_samples: usize) -> CurvePolyline {
    assert!(alpha_samples >= 2, "alpha_samples must be >= 2");
    let m = p.m();
    let arg_lambda = p.lambda().arg();
    let two_k1_pi = f64::from(2 * k + 1) * PI;

    let mut samples = Vec::new();
    for (lo, hi) in sigma_alpha_intervals(k, m, arg_lambda) {
        sample_polar_curve(
            lo,
            hi,
            alpha_samples,
            |alpha| (two_k1_pi - f64::from(m) * alpha - arg_lambda) / alpha.sin(),
            &mut samples,
        );
    }
    samples.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    CurvePolyline::new(CurveKind::SigmaDynamical, k, samples)
}

/// Admissible alpha intervals for sigma_k. Intervals may be empty or
/// inverted for some (k, m, Arg lambda); callers drop those.
fn sigma_alpha_intervals(k: i32, m: u32, arg_lambda: f64) -> Vec<(f64, f64)> {
    let j = i32::try_from(m / 2).expect("m fits in i32");
    let split = (f64::from(2 * k + 1) * PI - arg_lambda) / f64::from(m);
    let mut iv = Vec::new();
    let upper_origin_band = if m % 2 == 0 { j - 1 } else { j };

    if k >= upper_origin_band + 1 {
        iv.push((0.0, PI));
    }
    if k >= 0 && k <= upper_origin_band {
        iv.push((0.0, split.min(PI)));
    }
    if k >= -j && k <= 0 {
        iv.push((split.max(-PI), 0.0));
    }
    if k <= -(j + 1) {
        iv.push((-PI, 0.0));
    }
    iv
}

/// Uniformly samples rho(angle) e^{i angle} on (lo, hi), keeping only
/// finite positive radii.
pub(crate) fn sample_polar_curve(
    lo: f64,
    hi: f64,
    n: usize,
    rho: impl Fn(f64) -> f64,
    out: &mut Vec<CurveSample>,
) {
    let lo = lo + ANGLE_INSET;
    let hi = hi - ANGLE_INSET;
    if !(hi > lo) {
        return;
    }
    let step = (hi - lo) / (n - 1) as f64;
    for i in 0..n {
        let angle = lo + step * i as f64;
        let r = rho(angle);
        if r.is_finite() && r > 0.0 {
            out.push(CurveSample {
                angle,
                re: r * angle.cos(),
                im: r * angle.sin(),
            });
        }
    }
}

/// Largest residual of the defining preimage identity over the samples
/// of a sigma polyline: distance of Arg(lambda) + m Arg(z) + Im(z) from
/// pi on the circle.
pub fn sigma_identity_residual(curve: &CurvePolyline, p: &MapParams) -> f64 {
    let arg_lambda = p.lambda().arg();
    let m = f64::from(p.m());
    curve
        .samples
        .iter()
        .map(|s| {
            let z = s.z();
            crate::curves::circle_distance(arg_lambda + m * z.arg() + z.im, PI)
        })
        .fold(0.0, f64::max)
}
