//! Quadrature, root finding and summation.

mod euler_maclaurin;
mod log_domain;
mod quadrature;
mod roots;
mod summation;

pub use euler_maclaurin::{bernoulli_numbers, euler_maclaurin_sum, MAX_ORDER};
pub use log_domain::{log_integrate_exp, log_integrate_exp_with_peak};
pub use quadrature::{integrate, QuadResult, QuadratureConfig};
pub use roots::find_root_monotone;
pub use summation::{compensated_sum, NeumaierSum};
