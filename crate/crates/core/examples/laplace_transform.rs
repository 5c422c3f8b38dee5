//! Closed-form Laplace transform against direct numerical integration.

use scanstat::approx::laplace_phi_closed;
use scanstat::fixedpoint::u_c;
use scanstat::oracle::laplace_phi_quadrature;
use scanstat::ProcessParams;

fn main() -> scanstat::Result<()> {
    let p = ProcessParams::new(1.0, 1.0, 0.0)?;
    println!("abscissa of convergence: {:.12}", u_c(&p)?);
    for u in [0.0, 0.5, 1.0, 10.0, 100.0] {
        let closed = laplace_phi_closed(u, &p)?;
        let quad = laplace_phi_quadrature(u, &p, 1e-12)?;
        println!(
            "u={u:>5}: closed {closed:.12}, quadrature {:.12}, diff {:.1e}",
            quad.value,
            (closed - quad.value).abs()
        );
    }
    Ok(())
}
