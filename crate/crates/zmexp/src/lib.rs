//! Numerical toolkit for the entire transcendental maps
//! F(z) = lambda z^m e^z with m >= 2.
//!
//! Every member of the family has a superattracting fixed point at
//! z = 0 and one free critical point at z = -m. This crate computes the
//! finitely-certifiable structure of both planes:
//!
//! * [`regions`] solves the trap-disk radius `epsilon0`, the abscissa
//!   `x0`, and the wedge half-width `C(x)` that together certify basin
//!   membership, and samples the preimage curves of the negative real
//!   axis with their asymptotic strips.
//! * [`dynamics`] evaluates the map and its derivative with
//!   overflow-safe arithmetic and classifies seeds by trap, wedge, and
//!   escape tests.
//! * [`param`] classifies parameters by the fate of the critical orbit
//!   and computes the certified capture-zone geometry: disk bounds for
//!   the main zone, the unbounded wedge with its threshold `D0` and
//!   opening angle, the capture strips, and the expansion margin behind
//!   the polynomial-like restriction.
//! * [`render`] rasterizes either plane into deterministic, tile-count
//!   independent classification grids and encodes PPM or PNG.
//! * [`verify`] re-checks every numeric invariant over seeded samples
//!   and emits a machine-readable report with negative-control hooks.
//! * [`cli`] binds everything into the `zmexp` command line tool.
//!
//! The runnable examples under `examples/` demonstrate one capability
//! each; start with `basin_certificates` and `render_julia`.

pub mod cli;
pub mod curves;
pub mod dynamics;
pub mod error;
pub mod param;
pub mod regions;
pub mod render;
pub mod verify;

pub use curves::{CurveKind, CurvePolyline, CurveSample};
pub use dynamics::{
    classify_dynamical_point, iterate_orbit, DynamicalClass, IterationPolicy, MapParams,
    OrbitOutcome,
};
pub use error::{Error, Result};
pub use param::{
    c0_bounds, c2_alpha, c2_certificate, c3_strip_bounds, classify_parameter, gamma_curve,
    polynomial_like_margin, r_const, solve_d0, C2Geometry, CaptureCertificate, ParamClass,
    ZoneGeometry,
};
pub use regions::{
    epsilon0_lower_bound, h_aux, sigma_curve, solve_epsilon0, solve_x0, strip_bounds,
    RegionCertificates,
};
pub use render::{
    colorize, encode_image, encode_ppm, render_dynamical, render_parameter, ClassificationGrid,
    GridSpec, ImageFormat, Palette, ParamVerdict, RgbBuffer,
};
pub use verify::{run_suite, Corruption, SuiteConfig, VerificationReport};
