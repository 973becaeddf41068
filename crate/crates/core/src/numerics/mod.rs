//! Special functions, root finding and quadrature shared by the rest of the crate.
//!
//! Everything here is a pure function of its arguments.

pub mod optimize;
pub mod quadrature;
pub mod root;
pub mod special;

pub use optimize::{golden_section, refine_min};
pub use quadrature::{
    gaussian_expectation, integrate_adaptive, integrate_adaptive_with_breaks, GaussHermite,
    QuadratureConfig,
};
pub use root::solve_monotone_root;
pub use special::{gaussian_entropy, log_q_function, q_function};
