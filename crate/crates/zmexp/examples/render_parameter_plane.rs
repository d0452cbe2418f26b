//! Renders the parameter plane for one power m: each pixel lambda is
//! classified by the fate of the free critical orbit starting at -m.
//!
//! Capture zones (critical orbit falls into the basin of 0) are red,
//! escaping critical orbits black, other bounded behaviour blue. The
//! m = 2 window shows the bounded main zone around the origin, the
//! unbounded wedge on the left, and the horizontal capture strips
//! extending right.
//!
//! ```bash
//! cargo run --release --example render_parameter_plane
//! ```

use zmexp::dynamics::IterationPolicy;
use zmexp::render::{
    colorize, encode_image, render_parameter, GridSpec, ImageFormat, Palette, ParamVerdict,
};

fn main() -> zmexp::Result<()> {
    let m = 2;
    let spec = GridSpec::square(-25.0, 25.0, 600)?;
    let pol = IterationPolicy::default();
    let threads = std::thread::available_parallelism().map(usize::from).unwrap_or(1);

    let grid = render_parameter(&spec, m, &pol, threads)?;
    let buf = colorize(&grid, &Palette::default());
    encode_image(&buf, ImageFormat::Png, "param_m2.png".as_ref())?;

    let total = grid.cells.len() as f64;
    let captured = grid
        .cells
        .iter()
        .filter(|(v, _)| *v == ParamVerdict::Captured)
        .count() as f64;
    println!("wrote param_m2.png ({}x{})", spec.width, spec.height);
    println!("  captured parameters: {:.1}%", 100.0 * captured / total);
    Ok(())
}
