//! Exports the parameter-plane curves: parameters lambda whose critical
//! value F(-m) lands on a preimage curve of the negative real axis.
//!
//! These curves organize the capture strips. For even m they run to
//! +infinity with asymptotes Im(lambda) = (2k+1) pi r_m; for odd m they
//! run the other way and the index-j curve (m = 2j+1) is a horseshoe
//! cutting the positive real axis at (m+1) r_m.
//!
//! ```bash
//! cargo run --example gamma_curves
//! ```

use std::fs::File;
use zmexp::curves::write_curves_csv;
use zmexp::param::{c3_strip_bounds, gamma_curve, gamma_identity_residual, r_const};

fn main() -> zmexp::Result<()> {
    for m in [3u32, 4] {
        let curves: Vec<_> = (-6..=6).map(|k| gamma_curve(k, m, 1000)).collect();
        let path = format!("gamma_m{m}.csv");
        let file = File::create(&path).map_err(|source| zmexp::Error::Io {
            path: path.clone().into(),
            source,
        })?;
        write_curves_csv(&curves, file).map_err(|source| zmexp::Error::Io {
            path: path.clone().into(),
            source,
        })?;

        let worst = curves
            .iter()
            .map(|c| gamma_identity_residual(c, m))
            .fold(0.0f64, f64::max);
        println!("wrote {path}: 13 curves, worst identity residual {worst:.2e}");
        println!("  r_{m} = {:.6}, strip width r_{m} pi = {:.6}", r_const(m), r_const(m) * std::f64::consts::PI);
        for k in 0..=2 {
            let (lo, hi) = c3_strip_bounds(k, m);
            println!("  capture strip k = {k}: Im(lambda) in ({lo:8.4}, {hi:8.4})");
        }
    }
    Ok(())
}
