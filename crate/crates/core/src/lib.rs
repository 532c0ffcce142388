//! Rigorous numerics for Bernoulli-type sequences.
//!
//! * [`exactnum`]: exact Bernoulli and tangent numbers with independent oracles.
//! * [`ball`]: midpoint-radius arithmetic with enclosed elementary functions.
//! * [`special`]: certified enclosures of zeta, log-gamma and their derivatives.
//! * [`certify`]: `log theta` and its derivatives, the analytic bound chain,
//!   and adaptive sign certification.
//! * [`logmono`]: the ratio operator `R`, log-concavity verdicts and
//!   log-monotonicity scans.

pub mod ball;
pub mod certify;
pub mod error;
pub mod exactnum;
pub mod logmono;
pub mod special;

pub use ball::{Ball, Comparison, Constant, Dyadic};
pub use error::{Error, Result};
