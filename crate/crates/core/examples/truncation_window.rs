//! Summing only the terms near the Poisson mean.

use scanstat::exact::{make_window, phi_exact, phi_exact_full};
use scanstat::ProcessParams;

fn main() -> scanstat::Result<()> {
    let p = ProcessParams::new(1.0, 1.0 / 400.0, 400.0)?;
    let full = phi_exact_full(&p)?.value;
    println!("full sum: {full:.15e}");
    for a in [3.0, 4.0, 5.0, 6.0, 8.0] {
        let w = make_window(&p, a)?;
        let v = phi_exact(&p, Some(&w))?.value;
        println!(
            "a={a}: {:>4} terms, error {:.3e}, nominal bound {:.3e}",
            w.terms(),
            (v - full).abs(),
            w.error_bound
        );
    }
    Ok(())
}
