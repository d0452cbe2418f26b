use std::path::PathBuf;

/// Errors surfaced by parameter validation, the scalar solvers, and IO.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("solver domain error: {0}")]
    Domain(String),

    /// The scan for the outermost crossing of l = r_m^m found no sign
    /// change. Reported with the scan range so the caller can widen it.
    #[error("no crossing of l = r_m^m for m = {m} within |x| <= {scan_max} ({samples} log-spaced samples)")]
    NoCrossing { m: u32, scan_max: f64, samples: usize },

    /// The wedge boundary does not intersect the critical-value circle;
    /// |lambda| is too small for the wedge construction at this m.
    #[error("wedge intersection undefined: |lambda| = {abs_lambda} too small for m = {m}")]
    NoWedgeIntersection { abs_lambda: f64, m: u32 },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image encoding failed for {}: {message}", path.display())]
    Image { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
