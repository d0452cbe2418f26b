//! Runs the verification suite and prints one line per check, then the
//! full JSON report to `verify_report.json`.
//!
//! The suite re-checks every numeric invariant of the library (trap
//! contraction, wedge absorption, curve identities, capture-zone
//! certificates) over seeded samples; identical seeds reproduce the
//! entries byte for byte.
//!
//! ```bash
//! cargo run --release --example verify_suite
//! ```

use zmexp::verify::{run_suite, SuiteConfig};

fn main() -> zmexp::Result<()> {
    let cfg = SuiteConfig::default();
    let report = run_suite(&cfg)?;

    for e in &report.entries {
        println!(
            "{:5} {:28} residual {:12.3e} (tol {:9.1e})  [{} samples] {}",
            if e.pass { "ok" } else { "FAIL" },
            e.id,
            e.worst_residual,
            e.tolerance,
            e.samples,
            e.parameters,
        );
    }
    println!(
        "\n{} checks, all pass: {}",
        report.entries.len(),
        report.all_pass()
    );

    let path = "verify_report.json";
    std::fs::write(path, report.to_json()).map_err(|source| zmexp::Error::Io {
        path: path.into(),
        source,
    })?;
    println!("wrote {path}");
    std::process::exit(i32::from(!report.all_pass()));
}
