//! Gaussian tail probabilities.
//!
//! `Q(x) = P[Z > x]` for a standard normal `Z`. The direct form goes through
//! the complementary error function, which is accurate to a few ulps over the
//! whole range where `Q` is representable. Beyond [`LOG_TAIL_THRESHOLD`] the
//! logarithm is taken from the Mills ratio continued fraction instead, so the
//! log-domain value stays finite for arguments far past double underflow.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{ensure_finite, Result};

/// Argument beyond which `log Q` switches to the Mills ratio expansion.
pub const LOG_TAIL_THRESHOLD: f64 = 26.0;

/// `ln(sqrt(2 pi))`.
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Standard Gaussian tail probability `Q(x)`.
pub fn q_function(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(q(x))
}

/// Natural logarithm of `Q(x)`, accurate where `Q(x)` itself underflows.
pub fn log_q_function(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(log_q(x))
}

#[inline]
pub(crate) fn q(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// `1 - 2 Q(x)` for `x >= 0`, without cancellation near zero.
#[inline]
pub(crate) fn one_minus_two_q(x: f64) -> f64 {
    libm::erf(x / SQRT_2)
}

pub(crate) fn log_q(x: f64) -> f64 {
    if x < 0.0 {
        (-q(-x)).ln_1p()
    } else if x <= LOG_TAIL_THRESHOLD {
        q(x).ln()
    } else {
        -0.5 * x * x - LN_SQRT_2PI + mills_ratio(x).ln()
    }
}

/// `Q(x) / phi(x)` for large positive `x`, by backward evaluation of
/// `1 / (x + 1 / (x + 2 / (x + 3 / (x + ...))))`.
fn mills_ratio(x: f64) -> f64 {
    debug_assert!(x > 5.0);
    let mut tail = x;
    for k in (1..=60).rev() {
        tail = x + k as f64 / tail;
    }
    1.0 / tail
}

/// Standard normal density.
#[inline]
pub(crate) fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Gaussian density with mean `mean` and standard deviation `sigma`.
#[inline]
pub(crate) fn normal_pdf(y: f64, mean: f64, sigma: f64) -> f64 {
    std_normal_pdf((y - mean) / sigma) / sigma
}

#[inline]
pub(crate) fn normal_log_pdf(y: f64, mean: f64, sigma: f64) -> f64 {
    let z = (y - mean) / sigma;
    -0.5 * z * z - LN_SQRT_2PI - sigma.ln()
}

/// Differential entropy of a Gaussian with standard deviation `sigma`, in nats.
#[inline]
pub fn gaussian_entropy(sigma: f64) -> f64 {
    0.5 * (2.0 * PI * std::f64::consts::E * sigma * sigma).ln()
}

/// `ln(exp(a) - exp(b))` for `a > b`.
#[inline]
pub(crate) fn ln_sub_exp(a: f64, b: f64) -> f64 {
    a + (-(b - a).exp_m1()).ln()
}
