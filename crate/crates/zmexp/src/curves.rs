//! Sampled curve polylines shared by the dynamical and parameter planes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    /// Preimage of the negative real axis in the dynamical plane.
    SigmaDynamical,
    /// Parameters whose critical value lands on a sigma curve.
    GammaParameter,
}

impl CurveKind {
    /// Column name of the angle parameter in CSV exports.
    pub fn angle_column(&self) -> &'static str {
        match self {
            CurveKind::SigmaDynamical => "alpha",
            CurveKind::GammaParameter => "theta",
        }
    }
}

/// One retained sample: the angle parameter and the plane point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub angle: f64,
    pub re: f64,
    pub im: f64,
}

impl CurveSample {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// A sampled curve with its index and the angle range actually covered.
///
/// Samples are ordered by the angle parameter. `param_range` is the
/// envelope of the retained samples' angles; it is (0, 0) for an empty
/// polyline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePolyline {
    pub kind: CurveKind,
    pub k: i32,
    pub param_range: (f64, f64),
    pub samples: Vec<CurveSample>,
}

impl CurvePolyline {
    pub fn new(kind: CurveKind, k: i32, samples: Vec<CurveSample>) -> Self {
        let param_range = match (samples.first(), samples.last()) {
            (Some(a), Some(b)) => (a.angle, b.angle),
            _ => (0.0, 0.0),
        };
        Self {
            kind,
            k,
            param_range,
            samples,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.samples.iter().map(CurveSample::z)
    }
}

/// Writes a family of polylines as one CSV table with the columns
/// `k,<angle>,re,im`. All curves must share a kind so the angle column
/// is well defined.
pub fn write_curves_csv<W: Write>(curves: &[CurvePolyline], mut w: W) -> io::Result<()> {
    let angle = curves
        .first()
        .map(|c| c.kind.angle_column())
        .unwrap_or("alpha");
    writeln!(w, "k,{angle},re,im")?;
    for curve in curves {
        for s in &curve.samples {
            writeln!(w, "{},{},{},{}", curve.k, s.angle, s.re, s.im)?;
        }
    }
    Ok(())
}

/// Distance between two angles on the circle, in [0, pi].
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let d = (a - b).rem_euclid(tau);
    d.min(tau - d)
}
