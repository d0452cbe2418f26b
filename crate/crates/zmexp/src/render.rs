//! Tile-parallel classification grids and image encoding.
//!
//! Grids are partitioned into horizontal bands, each owned by exactly
//! one worker; workers share only immutable inputs and the bands are
//! merged in order. Every cell is a pure function of its pixel center,
//! so the output is bit-identical for any worker count.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::dynamics::{iterate_orbit, DynamicalClass, IterationPolicy, MapParams};
use crate::error::{Error, Result};
use crate::param::{classify_parameter, ParamClass};
use crate::regions::RegionCertificates;

/// A rectangular window of a plane and its pixel raster.
///
/// Pixel (i, j) samples the center of its cell: row 0 is the top of the
/// window, so j increases downward while the imaginary part decreases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub width: u32,
    pub height: u32,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, width: u32, height: u32) -> Result<Self> {
        if !(x_min < x_max) || !(y_min < y_max) {
            return Err(Error::InvalidParams(format!(
                "window must satisfy x_min < x_max and y_min < y_max, got ({x_min},{x_max})x({y_min},{y_max})"
            )));
        }
        if width == 0 || height == 0 {
            return Err(Error::InvalidParams("grid must be at least 1x1".into()));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
            width,
            height,
        })
    }

    pub fn square(min: f64, max: f64, size: u32) -> Result<Self> {
        Self::new(min, max, min, max, size, size)
    }

    /// Center of pixel (column i, row j).
    #[inline]
    pub fn center(&self, i: u32, j: u32) -> Complex64 {
        let dx = (self.x_max - self.x_min) / f64::from(self.width);
        let dy = (self.y_max - self.y_min) / f64::from(self.height);
        Complex64::new(
            self.x_min + (f64::from(i) + 0.5) * dx,
            self.y_max - (f64::from(j) + 0.5) * dy,
        )
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }
}

/// Per-pixel verdicts plus the first-hit step, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationGrid<V> {
    pub spec: GridSpec,
    pub cells: Vec<(V, u32)>,
}

impl<V: Copy> ClassificationGrid<V> {
    pub fn cell(&self, i: u32, j: u32) -> (V, u32) {
        self.cells[j as usize * self.width() + i as usize]
    }

    fn width(&self) -> usize {
        self.spec.width as usize
    }
}

/// Runs `classify` over every pixel center, `tiles` horizontal bands at
/// a time. Band boundaries cannot affect cell values, only scheduling.
fn render_grid<V: Copy + Send>(
    spec: &GridSpec,
    tiles: usize,
    classify: impl Fn(Complex64) -> (V, u32) + Sync,
) -> ClassificationGrid<V> {
    let tiles = tiles.max(1).min(spec.height as usize);
    let rows_per = spec.height as usize / tiles;
    let remainder = spec.height as usize % tiles;

    let mut bands: Vec<(u32, u32)> = Vec::with_capacity(tiles);
    let mut row = 0u32;
    for b in 0..tiles {
        let extra = u32::from(b < remainder);
        let rows = rows_per as u32 + extra;
        bands.push((row, row + rows));
        row += rows;
    }

    let classify = &classify;
    let band_cells: Vec<Vec<(V, u32)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = bands
            .iter()
            .map(|&(r0, r1)| {
                scope.spawn(move || {
                    let mut cells =
                        Vec::with_capacity((r1 - r0) as usize * spec.width as usize);
                    for j in r0..r1 {
                        for i in 0..spec.width {
                            cells.push(classify(spec.center(i, j)));
                        }
                    }
                    cells
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    let mut cells = Vec::with_capacity(spec.pixel_count());
    for band in band_cells {
        cells.extend(band);
    }
    ClassificationGrid { spec: *spec, cells }
}

/// Classifies every pixel of a dynamical-plane window.
pub fn render_dynamical(
    spec: &GridSpec,
    p: &MapParams,
    pol: &IterationPolicy,
    tiles: usize,
) -> Result<ClassificationGrid<DynamicalClass>> {
    pol.validate()?;
    let certs = RegionCertificates::for_params(p)?;
    Ok(render_grid(spec, tiles, |z| {
        let outcome = iterate_orbit(z, p, pol, &certs);
        (DynamicalClass::from(outcome), outcome.step())
    }))
}

/// Pixel verdict for the parameter plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParamVerdict {
    Captured,
    Escaping,
    BoundedUncaptured,
}

impl From<ParamClass> for ParamVerdict {
    fn from(c: ParamClass) -> Self {
        match c {
            ParamClass::Captured { .. } => ParamVerdict::Captured,
            ParamClass::Escaping { .. } => ParamVerdict::Escaping,
            ParamClass::BoundedUncaptured { .. } | ParamClass::Undecided { .. } => {
                ParamVerdict::BoundedUncaptured
            }
        }
    }
}

/// Classifies every pixel of a parameter-plane window for fixed m.
/// Certificates are solved per pixel since they depend on |lambda|.
pub fn render_parameter(
    spec: &GridSpec,
    m: u32,
    pol: &IterationPolicy,
    tiles: usize,
) -> Result<ClassificationGrid<ParamVerdict>> {
    if m < 2 {
        return Err(Error::InvalidParams(format!("m must be >= 2, got {m}")));
    }
    pol.validate()?;
    Ok(render_grid(spec, tiles, |lambda| {
        let class = classify_parameter(lambda, m, pol);
        (ParamVerdict::from(class), class.step())
    }))
}

pub type Rgb = [u8; 3];

/// Three-slot palette shared by both planes: basin/captured pixels,
/// escaping pixels, everything else. Optional brightness modulation by
/// the first-hit step, off by default so renders stay three-colored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Palette {
    pub attracted: Rgb,
    pub escaping: Rgb,
    pub other: Rgb,
    pub modulate_by_step: bool,
}

impl Default for Palette {
    fn default() -> Self {
        Self {
            attracted: [255, 0, 0],
            escaping: [0, 0, 0],
            other: [0, 0, 255],
            modulate_by_step: false,
        }
    }
}

/// Maps grid verdicts onto palette slots.
pub trait PaletteSlot {
    fn slot(&self, palette: &Palette) -> Rgb;
}

impl PaletteSlot for DynamicalClass {
    fn slot(&self, palette: &Palette) -> Rgb {
        match self {
            DynamicalClass::Basin0 => palette.attracted,
            DynamicalClass::Escaping => palette.escaping,
            DynamicalClass::OtherBounded => palette.other,
        }
    }
}

impl PaletteSlot for ParamVerdict {
    fn slot(&self, palette: &Palette) -> Rgb {
        match self {
            ParamVerdict::Captured => palette.attracted,
            ParamVerdict::Escaping => palette.escaping,
            ParamVerdict::BoundedUncaptured => palette.other,
        }
    }
}

/// Row-major 8-bit RGB buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbBuffer {
    pub width: u32,
    pub height: u32,
    pub data: Vec<u8>,
}

/// Renders a grid to RGB with the palette. With modulation on, the base
/// color fades geometrically in the first-hit step, keeping step-0 hits
/// at full brightness.
pub fn colorize<V: PaletteSlot + Copy>(
    grid: &ClassificationGrid<V>,
    palette: &Palette,
) -> RgbBuffer {
    let mut data = Vec::with_capacity(grid.cells.len() * 3);
    for &(verdict, step) in &grid.cells {
        let base = verdict.slot(palette);
        let rgb = if palette.modulate_by_step {
            let f = 0.35 + 0.65 * 0.97_f64.powi(step as i32);
            base.map(|c| (f64::from(c) * f).round() as u8)
        } else {
            base
        };
        data.extend_from_slice(&rgb);
    }
    RgbBuffer {
        width: grid.spec.width,
        height: grid.spec.height,
        data,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImageFormat {
    /// Binary P6, the byte-exact golden format.
    Ppm,
    /// Lossless PNG for presentation.
    Png,
}

/// Writes the buffer as binary PPM (P6, max value 255).
pub fn encode_ppm<W: Write>(buf: &RgbBuffer, mut w: W) -> std::io::Result<()> {
    write!(w, "P6\n{} {}\n255\n", buf.width, buf.height)?;
    w.write_all(&buf.data)
}

/// Encodes to the chosen format at `path`. IO failures carry the path
/// and the OS cause.
pub fn encode_image(buf: &RgbBuffer, format: ImageFormat, path: &Path) -> Result<()> {
    match format {
        ImageFormat::Ppm => {
            let file = File::create(path).map_err(|source| Error::Io {
                path: path.to_owned(),
                source,
            })?;
            let mut w = BufWriter::new(file);
            encode_ppm(buf, &mut w).and_then(|()| w.flush()).map_err(|source| Error::Io {
                path: path.to_owned(),
                source,
            })
        }
        ImageFormat::Png => {
            let img = image::RgbImage::from_raw(buf.width, buf.height, buf.data.clone())
                .ok_or_else(|| Error::Image {
                    path: path.to_owned(),
                    message: "buffer size does not match dimensions".into(),
                })?;
            img.save_with_format(path, image::ImageFormat::Png)
                .map_err(|e| Error::Image {
                    path: path.to_owned(),
                    message: e.to_string(),
                })
        }
    }
}
