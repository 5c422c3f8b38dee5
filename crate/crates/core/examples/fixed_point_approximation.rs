//! The fixed point `B = exp(-x B)` and the approximation built from it.

use scanstat::approx::phi_star;
use scanstat::exact::phi_exact;
use scanstat::fixedpoint::{a_of, solve_b, u_c};
use scanstat::ProcessParams;

fn main() -> scanstat::Result<()> {
    println!("{:>8} {:>20} {:>20}", "x", "B(x)", "A(x)");
    for x in [1e-6, 0.01, 0.2, 1.0, 10.0, 1e3] {
        println!("{x:>8} {:>20.15} {:>20.15}", solve_b(x)?.b, a_of(x)?);
    }

    let p = ProcessParams::new(1.0, 1.0, 0.0)?;
    println!("\ndecay rate u_c at lambda = s = 1: {:.15}", u_c(&p)?);
    println!("{:>4} {:>20} {:>20} {:>10}", "t", "phi", "phi*", "gap");
    for t in [1.0, 2.0, 3.0, 5.0, 10.0] {
        let p = ProcessParams::new(1.0, 1.0, t)?;
        let exact = phi_exact(&p, None)?.value;
        let star = phi_star(&p)?.value;
        println!(
            "{t:>4} {exact:>20.15} {star:>20.15} {:>10.2e}",
            star - exact
        );
    }
    Ok(())
}
