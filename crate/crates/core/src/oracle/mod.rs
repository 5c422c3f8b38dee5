//! Independent, slower routes to the same quantities, used to cross-check the
//! analytic modules: simulation of the Poisson process, marching the renewal
//! equation, and direct quadrature of the Laplace transform.

mod montecarlo;
mod quadrature;
mod renewal;

pub use montecarlo::{
    ks_critical_value, ks_two_sample, mc_phi, mc_phi2, mc_spacing, mc_tau, mc_tau2,
    mc_tau2_moments, tau2_samples, McEstimate, SampleMoments, SimConfig, Tau2Route,
};
pub use quadrature::{integrate_adaptive, laplace_phi_quadrature};
pub use renewal::renewal_phi;
