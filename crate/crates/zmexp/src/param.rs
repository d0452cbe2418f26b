//! Parameter-plane classification and certified capture-zone geometry.
//!
//! A parameter lambda is classified by the fate of the free critical
//! orbit starting at z = -m. The certified zone geometry consists of:
//!
//! * the main zone's inner and outer radii ([`c0_bounds`]);
//! * the unbounded wedge reached when the critical value falls into the
//!   wedge H ([`c2_certificate`], [`solve_d0`], [`c2_alpha`]);
//! * horizontal strips around the curves Gamma_k of parameters whose
//!   critical value lands on a sigma curve ([`gamma_curve`],
//!   [`c3_strip_bounds`]);
//! * the expansion margin on |z| = m - 1 that certifies the map is
//!   polynomial-like over that disk ([`polynomial_like_margin`]).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI};

use crate::curves::{CurveKind, CurvePolyline};
use crate::dynamics::{iterate_orbit, IterationPolicy, MapParams, OrbitOutcome};
use crate::error::{Error, Result};
use crate::regions::{sample_polar_curve, RegionCertificates};

/// r_m = (e/m)^m, the modulus scale of the critical value:
/// |F(-m)| = |lambda| / r_m.
pub fn r_const(m: u32) -> f64 {
    (E / f64::from(m)).powi(m as i32)
}

/// Which certificate the captured critical orbit acquired first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaptureCertificate {
    TrapDisk,
    HRegion,
}

/// Verdict for one parameter.
///
/// `first_trap_step` upper-bounds the capture index: it is the first
/// step at which the critical orbit is certified inside the basin (trap
/// disk or wedge), which may be earlier than certification of immediate
/// basin membership. `BoundedUncaptured` and `Undecided` both arise from
/// iteration exhaustion; classification reports `BoundedUncaptured` and
/// keeps the step count for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamClass {
    Escaping { step: u32 },
    Captured {
        first_trap_step: u32,
        certificate: CaptureCertificate,
    },
    BoundedUncaptured { steps_run: u32 },
    Undecided { steps_run: u32 },
}

impl ParamClass {
    pub fn is_captured(&self) -> bool {
        matches!(self, ParamClass::Captured { .. })
    }

    pub fn step(&self) -> u32 {
        match *self {
            ParamClass::Escaping { step } => step,
            ParamClass::Captured {
                first_trap_step, ..
            } => first_trap_step,
            ParamClass::BoundedUncaptured { steps_run } | ParamClass::Undecided { steps_run } => {
                steps_run
            }
        }
    }
}

/// Classifies lambda by iterating the free critical orbit.
///
/// Certificates are computed internally from (|lambda|, m). Escape is
/// only ever declared through the Re(z) criterion inside
/// [`iterate_orbit`], never from |z| alone. lambda = 0 (the zero map)
/// sends the critical point straight to the fixed point and is reported
/// as captured at step 1.
pub fn classify_parameter(lambda: Complex64, m: u32, pol: &IterationPolicy) -> ParamClass {
    assert!(m >= 2, "classify_parameter requires m >= 2");
    if lambda == Complex64::new(0.0, 0.0) {
        return ParamClass::Captured {
            first_trap_step: 1,
            certificate: CaptureCertificate::TrapDisk,
        };
    }
    let certs = RegionCertificates::compute(lambda.norm(), m)
        .expect("certificates exist for every finite nonzero lambda and m >= 2");
    classify_with_certificates(lambda, m, pol, &certs)
}

/// Classification against caller-supplied certificates. Intended for
/// verification harnesses that deliberately perturb the certificates;
/// ordinary callers use [`classify_parameter`].
pub fn classify_with_certificates(
    lambda: Complex64,
    m: u32,
    pol: &IterationPolicy,
    certs: &RegionCertificates,
) -> ParamClass {
    let p = match MapParams::new(lambda, m) {
        Ok(p) => p,
        Err(_) => {
            return ParamClass::Undecided { steps_run: 0 };
        }
    };
    match iterate_orbit(p.critical_point(), &p, pol, certs) {
        OrbitOutcome::EnteredTrap { step } => ParamClass::Captured {
            first_trap_step: step,
            certificate: CaptureCertificate::TrapDisk,
        },
        OrbitOutcome::EnteredH { step } => ParamClass::Captured {
            first_trap_step: step,
            certificate: CaptureCertificate::HRegion,
        },
        OrbitOutcome::Escaped { step } => ParamClass::Escaping { step },
        OrbitOutcome::Undecided { steps_run } => ParamClass::BoundedUncaptured { steps_run },
    }
}

/// Inner and outer radius bounds of the main capture zone:
/// the zone contains |lambda| < min(1/e, (e/m)^m) and is contained in
/// |lambda| <= (e/(m-1))^{m-1}.
pub fn c0_bounds(m: u32) -> (f64, f64) {
    let inner = (1.0 / E).min((E / f64::from(m)).powi(m as i32));
    let outer = (E / (f64::from(m) - 1.0)).powi(m as i32 - 1);
    (inner, outer)
}

/// True when the critical value w = (-1)^m lambda / r_m lies inside the
/// wedge H for (|lambda|, m), certifying capture with index at most 2.
pub fn c2_certificate(lambda: Complex64, m: u32) -> bool {
    let Ok(certs) = RegionCertificates::compute(lambda.norm(), m) else {
        return false;
    };
    let p = match MapParams::new(lambda, m) {
        Ok(p) => p,
        Err(_) => return false,
    };
    certs.contains_h(p.critical_value())
}

/// The real auxiliary function bounding the critical value's h-image:
///
/// l(x) = |x|^{m+1+1/(m-1)} exp((-1)^m x / r_m) e^{1/(m-1)}  for |x| > 1/e,
/// l(x) = |x|^{m+1} exp((-1)^m x / r_m)                       for |x| <= 1/e.
///
/// Capture of real parameters holds wherever l < r_m^m.
pub fn l_aux(lambda1: f64, m: u32) -> f64 {
    let rm = r_const(m);
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let ax = lambda1.abs();
    let m_f = f64::from(m);
    if ax > 1.0 / E {
        ax.powf(m_f + 1.0 + 1.0 / (m_f - 1.0))
            * (sign * lambda1 / rm).exp()
            * (1.0 / (m_f - 1.0)).exp()
    } else {
        ax.powi(m as i32 + 1) * (sign * lambda1 / rm).exp()
    }
}

const D0_SCAN_MAX: f64 = 1e3;
const D0_SCAN_MIN: f64 = 1e-3;
const D0_SCAN_SAMPLES: usize = 10_000;

/// The threshold D0 > 0 such that l < r_m^m holds on all of
/// (-inf, -D0) for even m, respectively (D0, +inf) for odd m.
///
/// Found by scanning |x| from 1e3 inward over 10^4 log-spaced samples
/// for the outermost crossing of l = r_m^m, then bisecting it. A missing
/// crossing within the scan range is surfaced as an error, not guessed.
pub fn solve_d0(m: u32) -> Result<f64> {
    if m < 2 {
        return Err(Error::Domain(format!("m must be >= 2, got {m}")));
    }
    let target = r_const(m).powi(m as i32);
    let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
    let l = |x: f64| l_aux(x, m);

    let ratio = (D0_SCAN_MIN / D0_SCAN_MAX).powf(1.0 / (D0_SCAN_SAMPLES - 1) as f64);
    let mut outer = sign * D0_SCAN_MAX;
    if l(outer) >= target {
        return Err(Error::NoCrossing {
            m,
            scan_max: D0_SCAN_MAX,
            samples: D0_SCAN_SAMPLES,
        });
    }
    let mut mag = D0_SCAN_MAX;
    for _ in 1..D0_SCAN_SAMPLES {
        mag *= ratio;
        let inner = sign * mag;
        if l(inner) >= target {
            // Bisect between outer (l < target) and inner (l >= target).
            let (mut below, mut above) = (outer, inner);
            for _ in 0..200 {
                let mid = 0.5 * (below + above);
                if mid == below || mid == above {
                    break;
                }
                if l(mid) < target {
                    below = mid;
                } else {
                    above = mid;
                }
            }
            return Ok(0.5 * (below + above) * sign);
        }
        outer = inner;
    }
    Err(Error::NoCrossing {
        m,
        scan_max: D0_SCAN_MAX,
        samples: D0_SCAN_SAMPLES,
    })
}

/// Opening angle alpha(|lambda|, m) of the capture wedge.
///
/// The wedge boundary meets the critical-value circle of radius
/// |lambda|/r_m at the conjugate points (lt1, +-lt2), with
/// lt1 = ln(epsilon0 r_m^m / |lambda|^{m+1}) and lt2 = C(lt1). The
/// returned angle is Arg(lt1 + i lt2), in (pi/2, pi) for |lambda|
/// beyond D0.
pub fn c2_alpha(abs_lambda: f64, m: u32) -> Result<f64> {
    let certs = RegionCertificates::compute(abs_lambda, m)?;
    let rm = r_const(m);
    let lt1 = (certs.epsilon0 * rm.powi(m as i32) / abs_lambda.powi(m as i32 + 1)).ln();
    if lt1 >= 0.0 {
        return Err(Error::NoWedgeIntersection { abs_lambda, m });
    }
    let lt2 = certs.half_width(lt1);
    Ok(lt2.atan2(lt1))
}

/// Wedge geometry for one m: the threshold D0 and the opening angle as
/// a function of |lambda|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct C2Geometry {
    pub m: u32,
    pub d0: f64,
}

impl C2Geometry {
    pub fn compute(m: u32) -> Result<Self> {
        Ok(Self {
            m,
            d0: solve_d0(m)?,
        })
    }

    pub fn alpha(&self, abs_lambda: f64) -> Result<f64> {
        c2_alpha(abs_lambda, self.m)
    }

    /// True when lambda lies in the certified wedge: |lambda| > D0 and
    /// the argument condition for the parity of m.
    pub fn contains(&self, lambda: Complex64) -> bool {
        let r = lambda.norm();
        if r <= self.d0 {
            return false;
        }
        let Ok(alpha) = self.alpha(r) else {
            return false;
        };
        if self.m % 2 == 0 {
            lambda.arg().abs() > alpha
        } else {
            lambda.arg().abs() < PI - alpha
        }
    }
}

/// Samples the curve Gamma_k of parameters whose critical value lands on
/// sigma_k.
///
/// With theta = Arg(lambda), the radius is
/// phi(theta) = r_m ((2k+1) pi - (m+1) theta) / sin(theta) for even m and
/// phi(theta) = r_m ((2k+1-m) pi - (m+1) theta) / (-sin(theta)) for odd m,
/// over theta ranges depending on k and the parity of m. Samples with
/// phi <= 0 are dropped; an empty range yields an empty polyline.
pub fn gamma_curve(k: i32, m: u32, theta_samples: usize) -> CurvePolyline {
    assert!(theta_samples >= 2, "theta_samples must be >= 2");
    assert!(m >= 2, "gamma_curve requires m >= 2");
    let rm = r_const(m);
    let m_f = f64::from(m);
    let k_f = f64::from(k);

    let mut samples = Vec::new();
    let phi: Box<dyn Fn(f64) -> f64> = if m % 2 == 0 {
        Box::new(move |theta: f64| {
            rm * ((2.0 * k_f + 1.0) * PI - (m_f + 1.0) * theta) / theta.sin()
        })
    } else {
        Box::new(move |theta: f64| {
            rm * ((2.0 * k_f + 1.0 - m_f) * PI - (m_f + 1.0) * theta) / (-theta.sin())
        })
    };
    for (lo, hi) in gamma_theta_intervals(k, m) {
        sample_polar_curve(lo, hi, theta_samples, &phi, &mut samples);
    }
    samples.sort_by(|a, b| a.angle.total_cmp(&b.angle));
    CurvePolyline::new(CurveKind::GammaParameter, k, samples)
}

/// Admissible theta ranges for Gamma_k by the parity of m.
fn gamma_theta_intervals(k: i32, m: u32) -> Vec<(f64, f64)> {
    let m_i = m as i32;
    let mut iv = Vec::new();
    if m % 2 == 0 {
        let j = m_i / 2;
        let split = f64::from(2 * k + 1) * PI / f64::from(m_i + 1);
        if k >= j + 1 {
            iv.push((0.0, PI));
        }
        if (0..=j).contains(&k) {
            iv.push((0.0, split.min(PI)));
        }
        if (-(j + 1)..=0).contains(&k) {
            iv.push((split.max(-PI), 0.0));
        }
        if k <= -(j + 2) {
            iv.push((-PI, 0.0));
        }
    } else {
        let j = (m_i - 1) / 2;
        let split = f64::from(2 * k + 1 - m_i) * PI / f64::from(m_i + 1);
        if k >= m_i {
            iv.push((0.0, PI));
        }
        if (j + 1..=m_i - 1).contains(&k) {
            iv.push((-PI, 0.0));
            iv.push((split.clamp(-PI, PI), PI));
        }
        if k == j {
            iv.push((-PI, PI));
        }
        if (0..=j - 1).contains(&k) {
            iv.push((-PI, split.clamp(-PI, PI)));
            iv.push((0.0, PI));
        }
        if k <= -1 {
            iv.push((-PI, 0.0));
        }
    }
    iv
}

/// Largest residual of the Gamma_k defining identity over a polyline:
/// the circle distance of Arg(lambda) + m Arg(w) + Im(w) from (2k+1) pi,
/// where w = (-1)^m lambda / r_m is the critical value.
pub fn gamma_identity_residual(curve: &CurvePolyline, m: u32) -> f64 {
    let rm = r_const(m);
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    curve
        .samples
        .iter()
        .map(|s| {
            let lambda = s.z();
            let w = lambda * (sign / rm);
            // (2k+1) pi is congruent to pi mod 2 pi.
            crate::curves::circle_distance(lambda.arg() + f64::from(m) * w.arg() + w.im, PI)
        })
        .fold(0.0, f64::max)
}

/// Im(lambda) interval of the capture strip with index k; the width is
/// r_m pi for every k.
pub fn c3_strip_bounds(k: i32, m: u32) -> (f64, f64) {
    let rm = r_const(m);
    let k_f = f64::from(k);
    if m % 2 == 0 {
        (
            rm * (PI / 2.0 + 2.0 * k_f * PI),
            rm * (3.0 * PI / 2.0 + 2.0 * k_f * PI),
        )
    } else {
        (
            rm * (-PI / 2.0 + 2.0 * k_f * PI),
            rm * (PI / 2.0 + 2.0 * k_f * PI),
        )
    }
}

/// Minimum of |F(z)| - (m - 1) over uniformly sampled |z| = m - 1.
///
/// A positive margin certifies that the image of the circle stays
/// outside the disk it bounds, the expansion hypothesis behind the
/// polynomial-like restriction. Uniform angular sampling gives a lower
/// bound on the true minimum; |F| on the circle is smooth with m-fold
/// angular structure, so 4096 samples resolve it comfortably.
pub fn polynomial_like_margin(p: &MapParams, samples: usize) -> f64 {
    assert!(samples >= 8, "polynomial_like_margin requires >= 8 samples");
    margin_on_circle(p, samples, f64::from(p.m()) - 1.0)
}

pub(crate) fn margin_on_circle(p: &MapParams, samples: usize, radius: f64) -> f64 {
    let step = std::f64::consts::TAU / samples as f64;
    let mut min = f64::INFINITY;
    for i in 0..samples {
        let theta = step * i as f64;
        let z = Complex64::from_polar(radius, theta);
        let v = p.eval(z).norm();
        if v < min {
            min = v;
        }
    }
    min - (f64::from(p.m()) - 1.0)
}

/// Exportable zone geometry for one m.
#[derive(Debug, Clone, Serialize)]
pub struct ZoneGeometry {
    pub m: u32,
    pub inner_radius: f64,
    pub outer_radius: f64,
    #[serde(rename = "D0")]
    pub d0: f64,
    pub gamma_curves: Vec<CurvePolyline>,
    pub c3_strips: Vec<StripBounds>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct StripBounds {
    pub k: i32,
    pub lo: f64,
    pub hi: f64,
}

/// Assembles the certified zone geometry: radii, wedge threshold, the
/// Gamma curves and strip intervals for k in the given range.
pub fn zone_geometry(
    m: u32,
    k_range: std::ops::RangeInclusive<i32>,
    theta_samples: usize,
) -> Result<ZoneGeometry> {
    let (inner_radius, outer_radius) = c0_bounds(m);
    let d0 = solve_d0(m)?;
    let mut gamma_curves = Vec::new();
    let mut c3_strips = Vec::new();
    for k in k_range {
        gamma_curves.push(gamma_curve(k, m, theta_samples));
        let (lo, hi) = c3_strip_bounds(k, m);
        c3_strips.push(StripBounds { k, lo, hi });
    }
    Ok(ZoneGeometry {
        m,
        inner_radius,
        outer_radius,
        d0,
        gamma_curves,
        c3_strips,
    })
}
