//! Computes the certified capture-zone geometry of the parameter plane
//! and writes it as JSON.
//!
//! For each m: the inner disk radius min(1/e, (e/m)^m) inside which the
//! critical value falls straight into the trap disk, the outer radius
//! (e/(m-1))^{m-1} beyond which the map is polynomial-like on
//! |z| < m - 1, the wedge threshold D0 with the opening angle
//! alpha(|lambda|), and the capture strips.
//!
//! ```bash
//! cargo run --example capture_zones
//! ```

use num_complex::Complex64;
use std::f64::consts::PI;
use zmexp::dynamics::{IterationPolicy, MapParams};
use zmexp::param::{
    classify_parameter, polynomial_like_margin, zone_geometry, C2Geometry, ParamClass,
};

fn main() -> zmexp::Result<()> {
    for m in [2u32, 3] {
        let zone = zone_geometry(m, -3..=3, 400)?;
        let path = format!("zones_m{m}.json");
        std::fs::write(&path, serde_json::to_string_pretty(&zone).expect("serializes"))
            .map_err(|source| zmexp::Error::Io {
                path: path.clone().into(),
                source,
            })?;
        println!("wrote {path}");
        println!(
            "  m = {m}: inner radius {:.6}, outer radius {:.6}, D0 = {:.6}",
            zone.inner_radius, zone.outer_radius, zone.d0
        );

        let geo = C2Geometry { m, d0: zone.d0 };
        for scale in [1.2, 2.0, 5.0] {
            let r = zone.d0 * scale;
            let alpha = geo.alpha(r)?;
            println!("  alpha({r:9.4}) = {alpha:.4} rad ({:6.2} deg)", alpha.to_degrees());
        }

        // Spot-check the three zone mechanisms with one classification each.
        let pol = IterationPolicy::default();
        let inner = Complex64::new(0.5 * zone.inner_radius, 0.0);
        let wedge_sign = if m % 2 == 0 { -1.0 } else { 1.0 };
        let wedge = Complex64::new(wedge_sign * zone.d0 * 2.0, 0.0);
        for (name, lam) in [("inner disk", inner), ("wedge", wedge)] {
            match classify_parameter(lam, m, &pol) {
                ParamClass::Captured {
                    first_trap_step, ..
                } => println!("  {name} sample {lam}: captured at step {first_trap_step}"),
                other => println!("  {name} sample {lam}: {other:?}"),
            }
        }
        let outside = Complex64::new(0.0, zone.outer_radius * 1.5);
        let p = MapParams::new(outside, m)?;
        println!(
            "  expansion margin at lambda = {outside}: {:.4}",
            polynomial_like_margin(&p, 4096)
        );
    }

    // Mid-strip capture for m = 2, k = 0.
    let mid = zmexp::param::r_const(2) * PI;
    let lam = Complex64::new(40.0, mid);
    println!(
        "mid-strip sample {lam}: {:?}",
        classify_parameter(lam, 2, &IterationPolicy::default())
    );
    Ok(())
}
