//! Run the fast self-check suite and summarize it.

use qharmonic::verify::{run_suite, Level};
use qharmonic::TruncationBudget;

fn main() -> qharmonic::Result<()> {
    let checks = run_suite(&[0.3, 0.5, 0.9], Level::Fast, &TruncationBudget::default())?;
    for c in checks.iter().filter(|c| c.check_name.contains("q=0.9") || !c.check_name.contains('q')) {
        println!(
            "{} {:<40} |err| = {:.1e} <= {:.0e}",
            if c.pass { "ok  " } else { "FAIL" },
            c.check_name,
            (c.measured - c.target).abs(),
            c.tolerance
        );
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    println!("{} checks, {failed} failed", checks.len());
    Ok(())
}
