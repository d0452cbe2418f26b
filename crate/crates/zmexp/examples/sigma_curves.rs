//! Exports the preimage curves of the negative real axis (the skeleton
//! of the basin strips in the dynamical plane) as CSV.
//!
//! Every sampled point z satisfies Arg(F(z)) = pi, so the curves map
//! onto the ray that feeds the wedge H. As Re(z) grows each curve
//! approaches its horizontal asymptote Im(z) = (2k+1) pi - Arg(lambda).
//!
//! ```bash
//! cargo run --example sigma_curves
//! ```

use num_complex::Complex64;
use std::fs::File;
use zmexp::curves::write_curves_csv;
use zmexp::dynamics::MapParams;
use zmexp::regions::{sigma_curve, sigma_identity_residual};

fn main() -> zmexp::Result<()> {
    let p = MapParams::new(Complex64::new(0.45, 0.35), 5)?;
    let curves: Vec<_> = (-6..=6).map(|k| sigma_curve(k, &p, 1000)).collect();

    let path = "sigma_m5.csv";
    let file = File::create(path).map_err(|source| zmexp::Error::Io {
        path: path.into(),
        source,
    })?;
    write_curves_csv(&curves, file).map_err(|source| zmexp::Error::Io {
        path: path.into(),
        source,
    })?;

    println!("wrote {path}");
    for curve in &curves {
        println!(
            "  sigma_{:2}: {:4} samples, alpha in [{:7.4}, {:7.4}], identity residual {:.2e}",
            curve.k,
            curve.len(),
            curve.param_range.0,
            curve.param_range.1,
            sigma_identity_residual(curve, &p),
        );
    }
    Ok(())
}
