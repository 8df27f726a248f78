//! Run every built-in self-check and print a summary.

use unrolljac::verify::{run_suite, Suite};

fn main() -> unrolljac::Result<()> {
    for suite in [Suite::Identities, Suite::Orthogonality, Suite::Oracles, Suite::BoundsDomination] {
        let checks = run_suite(suite)?;
        let failed = checks.iter().filter(|c| !c.passed).count();
        println!("{suite:?}: {} checks, {failed} failed", checks.len());
        for c in checks.iter().filter(|c| !c.passed) {
            println!("  {c}");
        }
    }
    Ok(())
}
