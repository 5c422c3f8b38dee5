//! Moments and distribution of the wait for the first close pair.

use scanstat::approx::tau_cdf_approx;
use scanstat::waiting_time::{tau2_cdf_exact, tau2_moments, tau_cdf_exact, tau_moments};
use scanstat::ProcessParams;

fn main() -> scanstat::Result<()> {
    let (lambda, s) = (1.0, std::f64::consts::LN_2);
    let m2 = tau2_moments(lambda, s);
    let m = tau_moments(lambda, s);
    println!("tau2: mean {:.12}, variance {:.12}", m2.mean, m2.variance);
    println!("tau:  mean {:.12}, variance {:.12}", m.mean, m.variance);

    println!(
        "\n{:>4} {:>14} {:>14} {:>14}",
        "t", "P(tau2<=t)", "P(tau<=t)", "approx"
    );
    for t in [1.0, 2.0, 4.0, 8.0] {
        let p = ProcessParams::new(lambda, s, t)?;
        println!(
            "{t:>4} {:>14.10} {:>14.10} {:>14.10}",
            tau2_cdf_exact(&p)?,
            tau_cdf_exact(&p)?,
            tau_cdf_approx(&p)?
        );
    }
    Ok(())
}
