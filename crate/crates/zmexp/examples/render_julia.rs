//! Renders the dynamical plane of F(z) = lambda z^m e^z.
//!
//! The basin of the superattracting fixed point 0 is drawn in red,
//! escaping points (an approximation of the Julia set's complement
//! structure) in black, and undecided bounded orbits in blue.
//!
//! ```bash
//! cargo run --release --example render_julia
//! ```

use num_complex::Complex64;
use zmexp::dynamics::{DynamicalClass, IterationPolicy, MapParams};
use zmexp::render::{colorize, encode_image, render_dynamical, GridSpec, ImageFormat, Palette};

fn main() -> zmexp::Result<()> {
    // A classic member of the m = 2 family with a rich mix of basin
    // strips and escaping regions.
    let p = MapParams::new(Complex64::new(-2.1, 0.0), 2)?;
    let spec = GridSpec::square(-10.0, 10.0, 800)?;
    let pol = IterationPolicy::default();
    let threads = std::thread::available_parallelism().map(usize::from).unwrap_or(1);

    let grid = render_dynamical(&spec, &p, &pol, threads)?;
    let buf = colorize(&grid, &Palette::default());
    encode_image(&buf, ImageFormat::Png, "julia_m2.png".as_ref())?;

    let total = grid.cells.len() as f64;
    let count = |class: DynamicalClass| {
        grid.cells.iter().filter(|(v, _)| *v == class).count() as f64 / total
    };
    println!("wrote julia_m2.png ({}x{})", spec.width, spec.height);
    println!("  basin of 0:    {:5.1}%", 100.0 * count(DynamicalClass::Basin0));
    println!("  escaping:      {:5.1}%", 100.0 * count(DynamicalClass::Escaping));
    println!("  other bounded: {:5.1}%", 100.0 * count(DynamicalClass::OtherBounded));
    Ok(())
}
