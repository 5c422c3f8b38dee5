//! Probability that no two consecutive events of a Poisson process on `[0, t]`
//! are closer than `s`, together with its fixed-point approximation, an
//! asymptotic series, waiting-time moments, and independent numerical oracles.
//!
//! ```
//! use scanstat::{ProcessParams, exact, approx};
//!
//! let p = ProcessParams::new(0.2, 1.0, 20.0).unwrap();
//! let phi = exact::phi_exact(&p, None).unwrap().value;
//! let star = approx::phi_star(&p).unwrap().value;
//! assert!((phi - star).abs() < 1e-12);
//! ```

pub mod approx;
pub mod cli;
pub mod error;
pub mod estimate;
pub mod exact;
pub mod fixedpoint;
pub mod numeric;
pub mod oracle;
pub mod params;
pub mod series;
pub mod waiting_time;

pub use error::{Error, Result};
pub use estimate::{Estimate, Method};
pub use params::{reduce, ProcessParams, ReducedParams};
