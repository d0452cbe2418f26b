//! Computes the certified basin data for a few (|lambda|, m) pairs.
//!
//! For each pair: the trap-disk radius epsilon0 (the unique positive
//! root of x^{m-1} e^x = 1/|lambda|) with its closed-form lower bound,
//! the abscissa x0 below which the real axis maps into the trap disk,
//! a few values of the wedge half-width C(x), and the asymptotic
//! cross-sections of the first preimage strips.
//!
//! ```bash
//! cargo run --example basin_certificates
//! ```

use num_complex::Complex64;
use zmexp::dynamics::MapParams;
use zmexp::regions::{epsilon0_lower_bound, strip_bounds, RegionCertificates};

fn main() -> zmexp::Result<()> {
    for (abs_lambda, m) in [(1.0, 2u32), (0.1, 2), (10.0, 2), (1.0, 3), (2.0, 5)] {
        let certs = RegionCertificates::compute(abs_lambda, m)?;
        println!("|lambda| = {abs_lambda}, m = {m}");
        println!(
            "  epsilon0 = {:.12}   (lower bound {:.12}, residual {:.2e})",
            certs.epsilon0,
            epsilon0_lower_bound(abs_lambda, m),
            certs.defining_residual(),
        );
        println!("  x0       = {:.12}", certs.x0);
        for dx in [1.0, 5.0, 20.0] {
            let x = certs.x0 - dx;
            println!("  C({x:8.3}) = {:.6}", certs.half_width(x));
        }
        println!("  JSON: {}", serde_json::to_string(&certs).expect("serializes"));
        println!();
    }

    // The strips are centered on (2k+1) pi - Arg(lambda) with asymptotic
    // half-width pi/2, independent of |lambda|.
    let p = MapParams::new(Complex64::new(0.45, 0.35), 5)?;
    println!("strip cross-sections for lambda = 0.45+0.35i, m = 5:");
    for k in -2..=2 {
        let (center, hw) = strip_bounds(k, &p);
        println!("  k = {k:2}: Im(z) in ({:8.4}, {:8.4})", center - hw, center + hw);
    }
    Ok(())
}
