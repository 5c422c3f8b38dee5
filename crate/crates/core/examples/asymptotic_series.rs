//! Integer polynomials `P_n` and the small-window series for `1 - phi`.

use scanstat::approx::phi_star;
use scanstat::series::{pn_polynomial, series_phi};
use scanstat::ProcessParams;

fn main() -> scanstat::Result<()> {
    for n in 0..=7 {
        let coeffs: Vec<String> = pn_polynomial(n)?
            .coefficients()
            .iter()
            .map(|c| c.to_string())
            .collect();
        println!("P_{n}: [{}]", coeffs.join(", "));
    }

    let p = ProcessParams::new(1.0, 1e-4, 1e4)?;
    let star = phi_star(&p)?.value;
    println!("\nphi* - series at lambda=1, s=1e-4, t=1e4");
    for order in 1..=10 {
        println!("N={order:>2}: {:+.3e}", star - series_phi(&p, order)?.value);
    }
    Ok(())
}
