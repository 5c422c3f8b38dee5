//! Probability that no two events of a Poisson process are closer than `s`.

use scanstat::exact::{log_phi_exact, phi2_exact, phi_exact, term_count};
use scanstat::ProcessParams;

fn main() -> scanstat::Result<()> {
    for (lambda, s, t) in [(0.2, 1.0, 20.0), (1.0, 1.0, 5.0), (2.0, 0.1, 500.0)] {
        let p = ProcessParams::new(lambda, s, t)?;
        let phi = phi_exact(&p, None)?;
        println!(
            "lambda={lambda} s={s} t={t}: phi = {:.10e} (ln {:.6}), phi2 = {:.10e}, {} terms, {:?}",
            phi.value,
            log_phi_exact(&p)?,
            phi2_exact(&p)?.value,
            term_count(&p),
            phi.method,
        );
    }
    Ok(())
}
