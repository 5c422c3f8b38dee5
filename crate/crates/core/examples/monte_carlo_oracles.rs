//! Three independent routes to the same probability.

use scanstat::exact::phi_exact;
use scanstat::oracle::{mc_phi, mc_tau2_moments, renewal_phi, SimConfig, Tau2Route};
use scanstat::waiting_time::tau2_moments;
use scanstat::ProcessParams;

fn main() -> scanstat::Result<()> {
    let cfg = SimConfig::new(7, 1_000_000);
    for t in [2.0, 3.5, 5.0] {
        let p = ProcessParams::new(1.0, 1.0, t)?;
        let mc = mc_phi(&p, &cfg)?;
        println!(
            "t={t}: exact {:.6}, renewal {:.6}, monte carlo {:.6} +- {:.1e}",
            phi_exact(&p, None)?.value,
            renewal_phi(&p, 1.0 / 128.0)?.value,
            mc.estimate,
            mc.stderr
        );
    }

    let exact = tau2_moments(1.0, 0.5);
    for route in [Tau2Route::Direct, Tau2Route::Decomposed] {
        let m = mc_tau2_moments(1.0, 0.5, &cfg, route)?;
        println!(
            "tau2 {route:?}: mean {:.4} +- {:.4} (exact {:.4})",
            m.mean,
            m.stderr_mean(),
            exact.mean
        );
    }
    Ok(())
}
