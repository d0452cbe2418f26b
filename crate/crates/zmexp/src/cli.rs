//! Command-line surface: render either plane, export curves and region
//! certificates, and run the verification suite.
//!
//! Exit codes: 0 on success, 1 on runtime or verification failure, 2 on
//! flag parse errors.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::dynamics::IterationPolicy;
use crate::error::{Error, Result};
use crate::render::{
    colorize, encode_image, render_dynamical, render_parameter, GridSpec, ImageFormat, Palette,
};
use crate::verify::{run_suite, LambdaGridSpec, SuiteConfig};
use crate::{curves, param, regions};

/// Thread-count fallback when `--threads` is not given.
pub const THREADS_ENV: &str = "ZMEXP_THREADS";

#[derive(Parser, Debug, Clone, PartialEq)]
#[command(
    name = "zmexp",
    version,
    about = "Dynamical and parameter planes of the maps lambda z^m e^z"
)]
pub struct JobConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Render the dynamical plane for one (lambda, m): the basin of 0 in
    /// red, escaping points in black, everything else in blue.
    Julia(JuliaArgs),
    /// Render the parameter plane for one m: capture zones in red,
    /// escaping critical orbits in black, other bounded orbits in blue.
    Param(ParamArgs),
    /// Export curve families: the preimage curves of the negative real
    /// axis (with --lambda) or the parameter-plane curves (without).
    Curves(CurvesArgs),
    /// Compute the certified region data for (|lambda|, m).
    Regions(RegionsArgs),
    /// Run the verification suite and emit a JSON report.
    Verify(VerifyArgs),
}

/// Window `x_min,x_max,y_min,y_max` in plane coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window(pub f64, pub f64, pub f64, pub f64);

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(format!("expected x_min,x_max,y_min,y_max, got {s:?}"));
        }
        let mut vals = [0.0; 4];
        for (v, p) in vals.iter_mut().zip(&parts) {
            *v = p
                .trim()
                .parse::<f64>()
                .map_err(|e| format!("bad window component {p:?}: {e}"))?;
        }
        Ok(Window(vals[0], vals[1], vals[2], vals[3]))
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.0, self.1, self.2, self.3)
    }
}

/// Raster size `WIDTHxHEIGHT`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Size(pub u32, pub u32);

impl FromStr for Size {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (w, h) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected WIDTHxHEIGHT, got {s:?}"))?;
        let w = w.trim().parse::<u32>().map_err(|e| format!("bad width: {e}"))?;
        let h = h.trim().parse::<u32>().map_err(|e| format!("bad height: {e}"))?;
        Ok(Size(w, h))
    }
}

impl fmt::Display for Size {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.0, self.1)
    }
}

/// Curve index range `lo,hi` (inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRange(pub i32, pub i32);

impl FromStr for KRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (lo, hi) = s
            .split_once(',')
            .ok_or_else(|| format!("expected lo,hi, got {s:?}"))?;
        let lo = lo.trim().parse::<i32>().map_err(|e| format!("bad lo: {e}"))?;
        let hi = hi.trim().parse::<i32>().map_err(|e| format!("bad hi: {e}"))?;
        if lo > hi {
            return Err(format!("k range is empty: {lo} > {hi}"));
        }
        Ok(KRange(lo, hi))
    }
}

impl fmt::Display for KRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0, self.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    /// Binary P6, byte-exact and golden-testable.
    Ppm,
    /// Lossless PNG.
    Png,
}

impl From<FormatArg> for ImageFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Ppm => ImageFormat::Ppm,
            FormatArg::Png => ImageFormat::Png,
        }
    }
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct JuliaArgs {
    /// Map coefficient, written like `1`, `-2.1`, `0.45+0.35i`, `2i`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub lambda: Complex64,
    /// Power of z (>= 2).
    #[arg(long)]
    pub m: u32,
    /// Plane window; defaults to -10,10,-10,10.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<Window>,
    #[arg(long, default_value = "800x800")]
    pub size: Size,
    #[arg(long, default_value_t = 200)]
    pub max_iter: u32,
    /// Escape threshold on Re(z).
    #[arg(long, default_value_t = 50.0)]
    pub escape_re: f64,
    /// Worker count; falls back to ZMEXP_THREADS, then to the number of
    /// available cores.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, default_value = "julia.ppm")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Ppm)]
    pub format: FormatArg,
    /// Fade colors by the first-hit step index.
    #[arg(long)]
    pub modulate: bool,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct ParamArgs {
    /// Power of z (>= 2).
    #[arg(long)]
    pub m: u32,
    /// Plane window; the default depends on m (e.g. -25,25,-25,25 for
    /// m = 2).
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<Window>,
    #[arg(long, default_value = "600x600")]
    pub size: Size,
    #[arg(long, default_value_t = 200)]
    pub max_iter: u32,
    #[arg(long, default_value_t = 50.0)]
    pub escape_re: f64,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, default_value = "param.ppm")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Ppm)]
    pub format: FormatArg,
    #[arg(long)]
    pub modulate: bool,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct CurvesArgs {
    /// Power of z (>= 2).
    #[arg(long)]
    pub m: u32,
    /// With a lambda, exports the dynamical-plane curves (preimages of
    /// the negative real axis); without, the parameter-plane curves.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub lambda: Option<Complex64>,
    /// Inclusive curve index range.
    #[arg(long, default_value = "-6,6")]
    pub k_range: KRange,
    /// Angular samples per curve.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit JSON instead of CSV.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct RegionsArgs {
    /// Power of z (>= 2).
    #[arg(long)]
    pub m: u32,
    /// Modulus of lambda.
    #[arg(long, default_value_t = 1.0)]
    pub abs_lambda: f64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit JSON instead of a text summary.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone, PartialEq)]
pub struct VerifyArgs {
    /// Powers to verify.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
    pub m: Vec<u32>,
    /// Sampling seed; identical seeds reproduce the report entries.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Report path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` with optional scientific notation.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let parse_re = |x: &str| {
        x.parse::<f64>()
            .map_err(|e| format!("bad real part {x:?}: {e}"))
    };
    let parse_im = |x: &str| match x {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => x
            .parse::<f64>()
            .map_err(|e| format!("bad imaginary part {x:?}: {e}")),
    };

    if let Some(body) = t.strip_suffix(['i', 'I']) {
        // Split at the sign that separates re from im, skipping a
        // leading sign and exponent signs.
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let b = bytes[idx];
            if (b == b'+' || b == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        match split {
            Some(idx) => Ok(Complex64::new(
                parse_re(&body[..idx])?,
                parse_im(&body[idx..])?,
            )),
            None => Ok(Complex64::new(0.0, parse_im(body)?)),
        }
    } else {
        Ok(Complex64::new(parse_re(&t)?, 0.0))
    }
}

/// Formats a complex value so that [`parse_complex`] reads it back
/// exactly.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

impl Command {
    /// Round-trips through the flag syntax: `parse(to_argv())` is
    /// identity.
    pub fn to_argv(&self) -> Vec<String> {
        let mut argv = vec!["zmexp".to_string()];
        match self {
            Command::Julia(a) => {
                argv.push("julia".into());
                argv.push(format!("--lambda={}", format_complex(a.lambda)));
                argv.push(format!("--m={}", a.m));
                if let Some(w) = a.window {
                    argv.push(format!("--window={w}"));
                }
                argv.push(format!("--size={}", a.size));
                argv.push(format!("--max-iter={}", a.max_iter));
                argv.push(format!("--escape-re={}", a.escape_re));
                if let Some(t) = a.threads {
                    argv.push(format!("--threads={t}"));
                }
                argv.push(format!("--out={}", a.out.display()));
                argv.push(format!("--format={}", format_name(a.format)));
                if a.modulate {
                    argv.push("--modulate".into());
                }
            }
            Command::Param(a) => {
                argv.push("param".into());
                argv.push(format!("--m={}", a.m));
                if let Some(w) = a.window {
                    argv.push(format!("--window={w}"));
                }
                argv.push(format!("--size={}", a.size));
                argv.push(format!("--max-iter={}", a.max_iter));
                argv.push(format!("--escape-re={}", a.escape_re));
                if let Some(t) = a.threads {
                    argv.push(format!("--threads={t}"));
                }
                argv.push(format!("--out={}", a.out.display()));
                argv.push(format!("--format={}", format_name(a.format)));
                if a.modulate {
                    argv.push("--modulate".into());
                }
            }
            Command::Curves(a) => {
                argv.push("curves".into());
                argv.push(format!("--m={}", a.m));
                if let Some(lam) = a.lambda {
                    argv.push(format!("--lambda={}", format_complex(lam)));
                }
                argv.push(format!("--k-range={}", a.k_range));
                argv.push(format!("--samples={}", a.samples));
                if let Some(out) = &a.out {
                    argv.push(format!("--out={}", out.display()));
                }
                if a.json {
                    argv.push("--json".into());
                }
            }
            Command::Regions(a) => {
                argv.push("regions".into());
                argv.push(format!("--m={}", a.m));
                argv.push(format!("--abs-lambda={}", a.abs_lambda));
                if let Some(out) = &a.out {
                    argv.push(format!("--out={}", out.display()));
                }
                if a.json {
                    argv.push("--json".into());
                }
            }
            Command::Verify(a) => {
                argv.push("verify".into());
                argv.push(format!(
                    "--m={}",
                    a.m.iter()
                        .map(u32::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                ));
                argv.push(format!("--seed={}", a.seed));
                if let Some(out) = &a.out {
                    argv.push(format!("--out={}", out.display()));
                }
                if let Some(t) = a.threads {
                    argv.push(format!("--threads={t}"));
                }
            }
        }
        argv
    }
}

fn format_name(f: FormatArg) -> &'static str {
    match f {
        FormatArg::Ppm => "ppm",
        FormatArg::Png => "png",
    }
}

/// Parses argv and dispatches. Returns the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cfg = match JobConfig::try_parse_from(argv) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cfg.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::Julia(a) => run_julia(a),
        Command::Param(a) => run_param(a),
        Command::Curves(a) => run_curves(a),
        Command::Regions(a) => run_regions(a),
        Command::Verify(a) => run_verify(a),
    }
}

fn resolve_threads(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .filter(|&t| t > 0)
    .unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(usize::from)
            .unwrap_or(1)
    })
}

/// Default windows reproduce the reference plots: (-10,10)^2 for the
/// dynamical plane, per-m ranges for the parameter plane.
fn default_param_window(m: u32) -> Window {
    match m {
        2 => Window(-25.0, 25.0, -25.0, 25.0),
        3 => Window(-12.0, 12.0, -12.0, 12.0),
        4 => Window(-4.0, 2.0, -3.0, 3.0),
        5 => Window(-0.8, 0.8, -0.8, 0.8),
        6 => Window(-0.15, 0.15, -0.15, 0.15),
        _ => Window(-10.0, 10.0, -10.0, 10.0),
    }
}

fn grid_from(window: Window, size: Size) -> Result<GridSpec> {
    GridSpec::new(window.0, window.1, window.2, window.3, size.0, size.1)
}

#[derive(Serialize)]
struct RenderSidecar<'a> {
    command: &'a str,
    lambda: Option<String>,
    m: u32,
    spec: GridSpec,
    policy: IterationPolicy,
    palette: Palette,
    format: FormatArg,
}

fn write_sidecar(path: &Path, sidecar: &RenderSidecar) -> Result<()> {
    let side_path = path.with_extension(format!(
        "{}.json",
        path.extension().and_then(|e| e.to_str()).unwrap_or("img")
    ));
    let json = serde_json::to_string_pretty(sidecar).expect("sidecar serializes");
    std::fs::write(&side_path, json).map_err(|source| Error::Io {
        path: side_path.clone(),
        source,
    })
}

fn run_julia(a: &JuliaArgs) -> Result<i32> {
    let p = crate::dynamics::MapParams::new(a.lambda, a.m)?;
    let window = a.window.unwrap_or(Window(-10.0, 10.0, -10.0, 10.0));
    let spec = grid_from(window, a.size)?;
    let pol = IterationPolicy::default()
        .with_max_iter(a.max_iter)
        .with_escape_re(a.escape_re);
    let grid = render_dynamical(&spec, &p, &pol, resolve_threads(a.threads))?;
    let palette = Palette {
        modulate_by_step: a.modulate,
        ..Palette::default()
    };
    let buf = colorize(&grid, &palette);
    encode_image(&buf, a.format.into(), &a.out)?;
    write_sidecar(
        &a.out,
        &RenderSidecar {
            command: "julia",
            lambda: Some(format_complex(a.lambda)),
            m: a.m,
            spec,
            policy: pol,
            palette,
            format: a.format,
        },
    )?;
    Ok(0)
}

fn run_param(a: &ParamArgs) -> Result<i32> {
    let window = a.window.unwrap_or_else(|| default_param_window(a.m));
    let spec = grid_from(window, a.size)?;
    let pol = IterationPolicy::default()
        .with_max_iter(a.max_iter)
        .with_escape_re(a.escape_re);
    let grid = render_parameter(&spec, a.m, &pol, resolve_threads(a.threads))?;
    let palette = Palette {
        modulate_by_step: a.modulate,
        ..Palette::default()
    };
    let buf = colorize(&grid, &palette);
    encode_image(&buf, a.format.into(), &a.out)?;
    write_sidecar(
        &a.out,
        &RenderSidecar {
            command: "param",
            lambda: None,
            m: a.m,
            spec,
            policy: pol,
            palette,
            format: a.format,
        },
    )?;
    Ok(0)
}

fn write_output(out: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => {
            let mut f = File::create(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            f.write_all(bytes).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })
        }
    }
}

fn run_curves(a: &CurvesArgs) -> Result<i32> {
    if a.samples < 2 {
        return Err(Error::InvalidParams("--samples must be >= 2".into()));
    }
    let curves: Vec<curves::CurvePolyline> = match a.lambda {
        Some(lambda) => {
            let p = crate::dynamics::MapParams::new(lambda, a.m)?;
            (a.k_range.0..=a.k_range.1)
                .map(|k| regions::sigma_curve(k, &p, a.samples))
                .collect()
        }
        None => {
            if a.m < 2 {
                return Err(Error::InvalidParams(format!("m must be >= 2, got {}", a.m)));
            }
            (a.k_range.0..=a.k_range.1)
                .map(|k| param::gamma_curve(k, a.m, a.samples))
                .collect()
        }
    };
    let bytes = if a.json {
        serde_json::to_vec_pretty(&curves).expect("curves serialize")
    } else {
        let mut buf = Vec::new();
        curves::write_curves_csv(&curves, &mut buf).map_err(|source| Error::Io {
            path: PathBuf::from("<buffer>"),
            source,
        })?;
        buf
    };
    write_output(a.out.as_ref(), &bytes)?;
    Ok(0)
}

fn run_regions(a: &RegionsArgs) -> Result<i32> {
    let certs = regions::RegionCertificates::compute(a.abs_lambda, a.m)?;
    let bytes = if a.json {
        serde_json::to_vec_pretty(&certs).expect("certificates serialize")
    } else {
        format!(
            "abs_lambda = {}\nm = {}\nepsilon0 = {:.15}\nx0 = {:.15}\ntol = {:e}\nlower_bound = {:.15}\n",
            certs.abs_lambda,
            certs.m,
            certs.epsilon0,
            certs.x0,
            certs.tol,
            regions::epsilon0_lower_bound(a.abs_lambda, a.m),
        )
        .into_bytes()
    };
    write_output(a.out.as_ref(), &bytes)?;
    Ok(0)
}

fn run_verify(a: &VerifyArgs) -> Result<i32> {
    let cfg = SuiteConfig {
        m_set: a.m.clone(),
        lambda_grid: LambdaGridSpec::default(),
        seed: a.seed,
        corruption: Default::default(),
    };
    let report = run_suite(&cfg)?;
    let mut bytes = report.to_json().into_bytes();
    bytes.push(b'\n');
    write_output(a.out.as_ref(), &bytes)?;
    Ok(if report.all_pass() { 0 } else { 1 })
}
