//! Runs the independent oracle suite and prints one line per check.
//!
//!     cargo run --release --example oracle_check [check ...]

use qbm::oracle::{run_suite, SuiteOptions};
use qbm::{BathModel, Temperature};

fn main() -> qbm::Result<()> {
    let opts = SuiteOptions { only: std::env::args().skip(1).collect(), ..Default::default() };
    let reports = run_suite(&BathModel::new(1.0, 0.01, 100.0, Temperature::Zero)?, &opts)?;
    for r in &reports {
        println!(
            "{} {:<22} abs {:.2e}  rel {:.2e}  tol {:.0e}",
            if r.pass { "ok  " } else { "FAIL" },
            r.name,
            r.max_abs,
            r.max_rel,
            r.tolerance
        );
    }
    if reports.iter().any(|r| !r.pass) {
        std::process::exit(4);
    }
    Ok(())
}
