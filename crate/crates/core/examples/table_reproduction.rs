//! Runs the golden-table checks and prints each comparison.

use scanstat::cli::golden_tables;

fn main() {
    let checks = golden_tables();
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} checks, {failed} failed", checks.len());
}
