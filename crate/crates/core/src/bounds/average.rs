//! Bounds with only an average constraint.

use std::f64::consts::{E, PI};

use super::{log_add_exp, BoundSource, BoundValue};
use crate::channel::ChannelParams;
use crate::error::{domain, Result};
use crate::numerics::special::{log_q, q, LN_SQRT_2PI};

/// Largest `E / sigma` for which the suggested parameters of
/// [`upper_case3_low`] are admissible, `e^{-1/(4e)}`.
pub const CASE3_LOW_HEURISTIC_LIMIT: f64 = 0.912_132_640_541_461_3;

fn average_only(params: &ChannelParams) -> Result<f64> {
    if params.peak().is_some() {
        return Err(domain("bound requires an average-only channel"));
    }
    Ok(params.average())
}

/// `ln(beta e^{-delta^2/(2 sigma^2)} + sqrt(2 pi) sigma Q(delta/sigma))`,
/// the log normalizer of the exponential output law.
fn log_normalizer(delta: f64, beta: f64, s: f64) -> f64 {
    let d = delta / s;
    log_add_exp(beta.ln() - 0.5 * d * d, LN_SQRT_2PI + s.ln() + log_q(d))
}

/// `e^{delta^2/(2 sigma^2)} Q(delta/sigma)`, stable for large `|delta|`.
fn scaled_tail(delta: f64, s: f64) -> f64 {
    let d = delta / s;
    (0.5 * d * d + log_q(d)).exp()
}

/// Positive root of `beta^2 - k beta - k sqrt(2 pi) sigma e^{delta^2/(2 sigma^2)} Q(delta/sigma) = 0`.
fn beta_root(k: f64, delta: f64, s: f64) -> f64 {
    let r = (2.0 * PI).sqrt() * s * scaled_tail(delta, s);
    0.5 * k + 0.5 * (k * k + 4.0 * k * r).sqrt()
}

/// Exponential-input lower bound.
pub fn lower_case3(params: &ChannelParams) -> Result<BoundValue> {
    let e_avg = average_only(params)?;
    let snr = e_avg / params.sigma();
    let v = 0.5 * (snr * snr * E / (2.0 * PI)).ln_1p();
    Ok(BoundValue::new(BoundSource::Case3Lower, v))
}

/// Low-power upper bound, valid for `delta <= -sigma / sqrt(e)`, `beta > 0`.
pub fn upper_case3_low(params: &ChannelParams, delta: f64, beta: f64) -> Result<BoundValue> {
    let e_avg = average_only(params)?;
    let s = params.sigma();
    if !(delta <= -s / E.sqrt()) || !delta.is_finite() {
        return Err(domain(format!(
            "delta must satisfy delta <= -sigma/sqrt(e) = {}, got {delta}",
            -s / E.sqrt()
        )));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(domain(format!("beta must be positive, got {beta}")));
    }
    let d = delta / s;
    let v = log_normalizer(delta, beta, s) - LN_SQRT_2PI - s.ln() - delta * e_avg / (2.0 * s * s)
        + 0.5 * d * d * (q(-d) - e_avg / delta * q(d))
        + (e_avg + s / (2.0 * PI).sqrt()) / beta;
    if !v.is_finite() {
        return Err(domain("upper bound evaluated to a non-finite value"));
    }
    Ok(BoundValue::new(BoundSource::Case3UpperLow, v)
        .with_param("delta", delta)
        .with_param("beta", beta))
}

/// High-power upper bound, valid for `delta >= 0`, `beta > 0`.
pub fn upper_case3_high(params: &ChannelParams, delta: f64, beta: f64) -> Result<BoundValue> {
    let e_avg = average_only(params)?;
    let s = params.sigma();
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(domain(format!("delta must be nonnegative, got {delta}")));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(domain(format!("beta must be positive, got {beta}")));
    }
    let d = delta / s;
    let gauss = (-0.5 * d * d).exp();
    let v = log_normalizer(delta, beta, s)
        + 0.5 * q(d)
        + d * gauss / (2.0 * (2.0 * PI).sqrt())
        + 0.5 * d * d * (1.0 - q((delta + e_avg) / s))
        + (delta + e_avg + s / (2.0 * PI).sqrt() * gauss) / beta
        - 0.5 * (2.0 * PI * E * s * s).ln();
    if !v.is_finite() {
        return Err(domain("upper bound evaluated to a non-finite value"));
    }
    Ok(BoundValue::new(BoundSource::Case3UpperHigh, v)
        .with_param("delta", delta)
        .with_param("beta", beta))
}

/// Suggested `(delta, beta)` for [`upper_case3_low`], or `None` when
/// `E / sigma` exceeds [`CASE3_LOW_HEURISTIC_LIMIT`].
pub fn heuristic_case3_low(params: &ChannelParams) -> Result<Option<(f64, f64)>> {
    let e_avg = average_only(params)?;
    let s = params.sigma();
    if e_avg / s > CASE3_LOW_HEURISTIC_LIMIT {
        return Ok(None);
    }
    let delta = -2.0 * s * (s / e_avg).ln().sqrt();
    let k = e_avg + s / (2.0 * PI).sqrt();
    Ok(Some((delta, beta_root(k, delta, s))))
}

/// Suggested `(delta, beta)` for [`upper_case3_high`].
pub fn heuristic_case3_high(params: &ChannelParams) -> Result<(f64, f64)> {
    let e_avg = average_only(params)?;
    let s = params.sigma();
    let delta = s * (e_avg / s).ln_1p();
    let d = delta / s;
    let k = delta + e_avg + s / (2.0 * PI).sqrt() * (-0.5 * d * d).exp();
    Ok((delta, beta_root(k, delta, s)))
}
