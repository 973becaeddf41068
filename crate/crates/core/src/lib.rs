//! Capacity bounds for the free-space optical intensity channel.
//!
//! The channel is `Y = x + Z` with `Z ~ N(0, sigma^2)`, a nonnegative input
//! and a peak constraint `x <= A` and/or an average constraint `E[X] <= E`.
//! This crate evaluates closed-form upper and lower bounds on its capacity,
//! their high- and low-power asymptotes, and an independent numerical
//! capacity estimate (constrained Blahut–Arimoto plus duality checks) used
//! to validate them.

// `!(x > 0.0)` style checks are kept on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod channel;
pub mod cli;
pub mod error;
pub mod numerics;
pub mod oracle;

pub use channel::{classify, CaseLabel, ChannelParams, DbConvention};
pub use error::{Error, Result};
