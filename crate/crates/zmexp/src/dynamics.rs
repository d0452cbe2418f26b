//! Evaluation and iteration of the maps F(z) = lambda z^m e^z.
//!
//! Everything here is a pure function of its inputs, so orbits can be
//! classified from many worker threads without shared state. Abnormal
//! arithmetic (overflow to infinity, NaN) never panics; it is absorbed
//! into the [`OrbitOutcome`] verdicts.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regions::RegionCertificates;

/// One member of the family F(z) = lambda z^m e^z.
///
/// The power must satisfy m >= 2: below that the map has no free
/// critical point (m = 0 is the exponential family, m = 1 has its only
/// critical point at -1 but a non-degenerate fixed point at 0), and the
/// constructions in this crate rely on z = 0 being superattracting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapParams {
    lambda: Complex64,
    m: u32,
}

impl MapParams {
    pub fn new(lambda: Complex64, m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParams(format!("m must be >= 2, got {m}")));
        }
        if lambda == Complex64::new(0.0, 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParams(
                "lambda must be finite and non-zero".into(),
            ));
        }
        Ok(Self { lambda, m })
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// F(z) = lambda z^m e^z.
    ///
    /// The integer power goes through repeated squaring (`powu`), not
    /// through log/exp, so tiny |z| keeps full relative accuracy and
    /// z = 0 maps to 0 exactly. Overflow produces non-finite components
    /// in the returned value, never a panic.
    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.lambda * z.powu(self.m) * z.exp()
    }

    /// F'(z) = lambda e^z z^(m-1) (m + z).
    ///
    /// Vanishes exactly at z = 0 (order m - 1) and at the free critical
    /// point z = -m.
    #[inline]
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let m = f64::from(self.m);
        self.lambda * z.exp() * z.powu(self.m - 1) * (z + m)
    }

    /// The free critical point z = -m.
    pub fn critical_point(&self) -> Complex64 {
        Complex64::new(-f64::from(self.m), 0.0)
    }

    /// The free critical value F(-m) = (-1)^m lambda (m/e)^m.
    pub fn critical_value(&self) -> Complex64 {
        let m = f64::from(self.m);
        let scale = (m / std::f64::consts::E).powi(self.m as i32);
        let sign = if self.m % 2 == 0 { 1.0 } else { -1.0 };
        self.lambda * (sign * scale)
    }
}

/// Stopping rules for orbit iteration.
///
/// `escape_re` implements the escape test on Re(z); orbits that escape
/// do so with real part tending to +infinity, so a single threshold
/// (default 50) suffices for classification. `overflow_re` is the
/// double-precision guard: beyond it `e^z` is not representable and the
/// orbit is also classified as escaped. `trap_radius` is the radius for
/// the trap-disk test; the default 0 delegates to the certificates
/// passed alongside, a positive value overrides them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationPolicy {
    pub max_iter: u32,
    pub escape_re: f64,
    pub overflow_re: f64,
    pub trap_radius: f64,
}

impl Default for IterationPolicy {
    fn default() -> Self {
        Self {
            max_iter: 200,
            escape_re: 50.0,
            overflow_re: 700.0,
            trap_radius: 0.0,
        }
    }
}

impl IterationPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter < 1 {
            return Err(Error::InvalidParams("max_iter must be >= 1".into()));
        }
        if !(self.escape_re <= self.overflow_re) {
            return Err(Error::InvalidParams(format!(
                "escape_re ({}) must not exceed overflow_re ({})",
                self.escape_re, self.overflow_re
            )));
        }
        if !(self.trap_radius >= 0.0) {
            return Err(Error::InvalidParams("trap_radius must be >= 0".into()));
        }
        Ok(())
    }

    pub fn with_max_iter(mut self, max_iter: u32) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_escape_re(mut self, escape_re: f64) -> Self {
        self.escape_re = escape_re;
        self
    }

    pub fn with_trap_radius(mut self, trap_radius: f64) -> Self {
        self.trap_radius = trap_radius;
        self
    }
}

/// The first certificate an orbit acquires, or exhaustion.
///
/// `step` counts applications of the map; the seed itself is step 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitOutcome {
    /// |z_n| < trap radius: the orbit is inside the forward-invariant
    /// disk around 0 and converges to the fixed point.
    EnteredTrap { step: u32 },
    /// z_n lies in the wedge H, whose image is inside the trap disk.
    EnteredH { step: u32 },
    /// Re(z_n) crossed the escape or overflow threshold, or the
    /// arithmetic degenerated (non-finite value).
    Escaped { step: u32 },
    /// No test fired within `max_iter` applications of the map.
    Undecided { steps_run: u32 },
}

impl OrbitOutcome {
    /// The step index carried by the outcome (steps run, for `Undecided`).
    pub fn step(&self) -> u32 {
        match *self {
            OrbitOutcome::EnteredTrap { step }
            | OrbitOutcome::EnteredH { step }
            | OrbitOutcome::Escaped { step } => step,
            OrbitOutcome::Undecided { steps_run } => steps_run,
        }
    }

    pub fn is_basin(&self) -> bool {
        matches!(
            self,
            OrbitOutcome::EnteredTrap { .. } | OrbitOutcome::EnteredH { .. }
        )
    }
}

/// Iterates z0 under F and reports the first certificate acquired.
///
/// At every step n (the seed is step 0) the tests run in a fixed order:
/// trap disk, wedge H, escape threshold, overflow/non-finite guard. A
/// point can satisfy at most one of trap and escape, but the order is
/// pinned so identical inputs give identical outcomes bit for bit.
pub fn iterate_orbit(
    z0: Complex64,
    p: &MapParams,
    pol: &IterationPolicy,
    certs: &RegionCertificates,
) -> OrbitOutcome {
    let trap = if pol.trap_radius > 0.0 {
        pol.trap_radius
    } else {
        certs.epsilon0
    };
    let trap_sq = trap * trap;

    let mut z = z0;
    for step in 0..=pol.max_iter {
        if z.norm_sqr() < trap_sq {
            return OrbitOutcome::EnteredTrap { step };
        }
        if certs.contains_h(z) {
            return OrbitOutcome::EnteredH { step };
        }
        if z.re > pol.escape_re {
            return OrbitOutcome::Escaped { step };
        }
        if z.re > pol.overflow_re || !z.is_finite() {
            return OrbitOutcome::Escaped { step };
        }
        if step == pol.max_iter {
            break;
        }
        z = p.eval(z);
    }
    OrbitOutcome::Undecided {
        steps_run: pol.max_iter,
    }
}

/// Pixel verdict for the dynamical plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynamicalClass {
    /// Certified member of the basin of 0 (trap disk or wedge entry).
    Basin0,
    /// Orbit escapes; approximates the Julia set's complement structure.
    Escaping,
    /// Iteration budget exhausted. This conflates deep basin points with
    /// genuinely non-attracted bounded orbits; raising `max_iter`
    /// shrinks the former.
    OtherBounded,
}

impl From<OrbitOutcome> for DynamicalClass {
    fn from(o: OrbitOutcome) -> Self {
        match o {
            OrbitOutcome::EnteredTrap { .. } | OrbitOutcome::EnteredH { .. } => {
                DynamicalClass::Basin0
            }
            OrbitOutcome::Escaped { .. } => DynamicalClass::Escaping,
            OrbitOutcome::Undecided { .. } => DynamicalClass::OtherBounded,
        }
    }
}

/// Classifies one seed of the dynamical plane.
pub fn classify_dynamical_point(
    z0: Complex64,
    p: &MapParams,
    pol: &IterationPolicy,
    certs: &RegionCertificates,
) -> DynamicalClass {
    iterate_orbit(z0, p, pol, certs).into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::RegionCertificates;
    use num_complex::Complex64;
    use std::f64::consts::E;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(MapParams::new(c(1.0, 0.0), 0).is_err());
        assert!(MapParams::new(c(1.0, 0.0), 1).is_err());
        assert!(MapParams::new(c(0.0, 0.0), 2).is_err());
        assert!(MapParams::new(c(f64::NAN, 0.0), 2).is_err());
        assert!(MapParams::new(c(-2.1, 0.0), 2).is_ok());
    }

    #[test]
    fn eval_at_zero_is_exactly_zero() {
        let p = MapParams::new(c(3.7, -1.2), 5).unwrap();
        assert_eq!(p.eval(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn eval_matches_hand_values() {
        let p = MapParams::new(c(1.0, 0.0), 2).unwrap();
        let v = p.eval(c(1.0, 0.0));
        assert!((v - c(E, 0.0)).norm() < 1e-15);

        // lambda = -2.1, m = 2, z = -2:  -8.4 e^{-2}
        let p = MapParams::new(c(-2.1, 0.0), 2).unwrap();
        let v = p.eval(c(-2.0, 0.0));
        assert!((v.re - (-1.136_816_379_187_546_6)).abs() < 1e-12, "{}", v.re);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn eval_overflow_is_nonfinite_not_panic() {
        let p = MapParams::new(c(1.0, 0.0), 2).unwrap();
        let v = p.eval(c(800.0, 0.0));
        assert!(!v.is_finite());
    }

    #[test]
    fn derivative_vanishes_at_zero_and_critical_point() {
        for m in 2..=6 {
            let p = MapParams::new(c(0.3, 1.1), m).unwrap();
            assert_eq!(p.derivative(c(0.0, 0.0)), c(0.0, 0.0));
            let d = p.derivative(p.critical_point());
            assert_eq!(d, c(0.0, 0.0));
        }
    }

    #[test]
    fn derivative_at_trap_radius_is_m_plus_radius() {
        // For real lambda > 0 the defining equation makes
        // lambda eps0^{m-1} e^{eps0} = 1, so F'(eps0) = m + eps0.
        for (al, m) in [(0.5, 2u32), (1.0, 2), (2.0, 3)] {
            let certs = RegionCertificates::compute(al, m).unwrap();
            let p = MapParams::new(c(al, 0.0), m).unwrap();
            let d = p.derivative(c(certs.epsilon0, 0.0));
            let expected = f64::from(m) + certs.epsilon0;
            assert!((d.re - expected).abs() < 1e-8, "m={m} al={al}: {d}");
            assert!(d.im.abs() < 1e-12);
        }
    }

    #[test]
    fn critical_value_examples() {
        let p = MapParams::new(c(1.0, 0.0), 2).unwrap();
        assert!((p.critical_value().re - 0.541_341_132_946_450_8).abs() < 1e-15);

        let p = MapParams::new(c(1.0, 0.0), 3).unwrap();
        assert!((p.critical_value().re - (-1.344_250_845_932_326_5)).abs() < 1e-12);

        // lambda = (-1)^{m-1} m (e/m)^m turns -m into a fixed critical point.
        for m in 2..=5u32 {
            let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
            let lam = sign * f64::from(m) * (E / f64::from(m)).powi(m as i32);
            let p = MapParams::new(c(lam, 0.0), m).unwrap();
            let cv = p.critical_value();
            assert!(
                (cv - c(-f64::from(m), 0.0)).norm() < 1e-12,
                "m={m}: {cv}"
            );
        }
    }

    #[test]
    fn critical_value_agrees_with_eval_at_critical_point() {
        let p = MapParams::new(c(0.45, 0.35), 5).unwrap();
        let a = p.critical_value();
        let b = p.eval(p.critical_point());
        assert!((a - b).norm() < 1e-14 * a.norm());
    }

    #[test]
    fn orbit_origin_enters_trap_at_step_zero() {
        let p = MapParams::new(c(1.0, 0.0), 2).unwrap();
        let certs = RegionCertificates::for_params(&p).unwrap();
        let o = iterate_orbit(c(0.0, 0.0), &p, &IterationPolicy::default(), &certs);
        assert_eq!(o, OrbitOutcome::EnteredTrap { step: 0 });
    }

    #[test]
    fn small_lambda_captures_critical_point_within_one_step() {
        for m in 2..=5u32 {
            let inner = (1.0 / E).min((E / f64::from(m)).powi(m as i32));
            let p = MapParams::new(c(0.5 * inner, 0.0), m).unwrap();
            let certs = RegionCertificates::for_params(&p).unwrap();
            let o = iterate_orbit(p.critical_point(), &p, &IterationPolicy::default(), &certs);
            match o {
                OrbitOutcome::EnteredTrap { step } => assert!(step <= 1, "m={m}: step {step}"),
                other => panic!("m={m}: expected trap entry, got {other:?}"),
            }
        }
    }

    #[test]
    fn escape_from_positive_real_axis() {
        let p = MapParams::new(c(6.9, 0.0), 2).unwrap();
        let certs = RegionCertificates::for_params(&p).unwrap();
        let o = iterate_orbit(c(10.0, 0.0), &p, &IterationPolicy::default(), &certs);
        match o {
            OrbitOutcome::Escaped { step } => assert!(step >= 1),
            other => panic!("expected escape, got {other:?}"),
        }
    }

    #[test]
    fn superattracting_critical_orbit_stays_undecided() {
        // lambda = -e^2/2 makes -2 a fixed critical point for m = 2; the
        // orbit never reaches the trap disk, so classification falls
        // through to OtherBounded.
        let p = MapParams::new(c(-E * E / 2.0, 0.0), 2).unwrap();
        let certs = RegionCertificates::for_params(&p).unwrap();
        let class = classify_dynamical_point(c(-2.0, 0.0), &p, &IterationPolicy::default(), &certs);
        assert_eq!(class, DynamicalClass::OtherBounded);
    }

    #[test]
    fn classify_maps_outcomes_to_verdicts() {
        let p = MapParams::new(c(6.9, 0.0), 2).unwrap();
        let certs = RegionCertificates::for_params(&p).unwrap();
        let pol = IterationPolicy::default();
        assert_eq!(
            classify_dynamical_point(c(0.0, 0.0), &p, &pol, &certs),
            DynamicalClass::Basin0
        );
        assert_eq!(
            classify_dynamical_point(c(10.0, 0.0), &p, &pol, &certs),
            DynamicalClass::Escaping
        );
    }

    #[test]
    fn fixed_point_identity_for_positive_real_lambda() {
        for (al, m) in [(0.5, 2u32), (1.0, 2), (2.0, 2), (0.5, 3), (1.0, 3), (2.0, 3)] {
            let certs = RegionCertificates::compute(al, m).unwrap();
            let p = MapParams::new(c(al, 0.0), m).unwrap();
            let fp = p.eval(c(certs.epsilon0, 0.0));
            assert!(
                (fp - c(certs.epsilon0, 0.0)).norm() < 1e-9,
                "al={al} m={m}: residual {}",
                (fp - c(certs.epsilon0, 0.0)).norm()
            );
        }
    }

    #[test]
    fn policy_validation() {
        assert!(IterationPolicy::default().validate().is_ok());
        assert!(IterationPolicy::default()
            .with_escape_re(800.0)
            .validate()
            .is_err());
        assert!(IterationPolicy::default()
            .with_trap_radius(-1.0)
            .validate()
            .is_err());
        let mut pol = IterationPolicy::default();
        pol.max_iter = 0;
        assert!(pol.validate().is_err());
    }

    #[test]
    fn outcomes_are_deterministic() {
        let p = MapParams::new(c(0.45, 0.35), 5).unwrap();
        let certs = RegionCertificates::for_params(&p).unwrap();
        let pol = IterationPolicy::default();
        for i in 0..50 {
            let z = c(-8.0 + 0.35 * f64::from(i), 0.21 * f64::from(i) - 4.0);
            let a = iterate_orbit(z, &p, &pol, &certs);
            let b = iterate_orbit(z, &p, &pol, &certs);
            assert_eq!(a, b);
        }
    }
}
