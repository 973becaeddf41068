//! Bounds with a peak constraint (`alpha < 1/2` and `alpha >= 1/2`).

use std::f64::consts::{E, PI};

use super::{softplus, BoundSource, BoundValue};
use crate::channel::ChannelParams;
use crate::error::{domain, Result};
use crate::numerics::solve_monotone_root;
use crate::numerics::special::{ln_sub_exp, one_minus_two_q, q, std_normal_pdf, LN_SQRT_2PI};

/// `1/mu - e^{-mu} / (1 - e^{-mu})`, the mean of the truncated exponential
/// on `[0, 1]` with rate `mu`. Decreases from `1/2` (at `mu -> 0`) to `0`.
fn truncated_exponential_mean(mu: f64) -> f64 {
    if mu < 0.05 {
        let m2 = mu * mu;
        0.5 - mu / 12.0 + mu * m2 / 720.0 - mu * m2 * m2 / 30_240.0
            + mu * m2 * m2 * m2 / 1_209_600.0
    } else {
        1.0 / mu - 1.0 / mu.exp_m1()
    }
}

/// Residual `alpha - (1/mu - e^{-mu}/(1-e^{-mu}))`.
pub fn mu_star_residual(alpha: f64, mu: f64) -> f64 {
    alpha - truncated_exponential_mean(mu)
}

/// Rate of the maximum-entropy input on `[0, A]` with mean `alpha * A`,
/// in units of `1/A`.
pub fn mu_star(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(domain(format!("mu* needs alpha in (0, 1/2), got {alpha}")));
    }
    let hi = (2.0 / alpha + 10.0).max(50.0);
    solve_monotone_root(|mu| truncated_exponential_mean(mu) - alpha, 1e-9, hi, 1e-14)
}

fn active_alpha(params: &ChannelParams, allow_half: bool) -> Result<(f64, f64)> {
    let a = params.require_peak()?;
    let alpha = params.average() / a;
    let ok = if allow_half {
        alpha <= 0.5
    } else {
        alpha < 0.5
    };
    if !ok {
        return Err(domain(format!("bound requires alpha < 1/2, got {alpha}")));
    }
    Ok((a, alpha))
}

fn inactive_peak(params: &ChannelParams) -> Result<f64> {
    let a = params.require_peak()?;
    let alpha = params.average() / a;
    if alpha < 0.5 {
        return Err(domain(format!("bound requires alpha >= 1/2, got {alpha}")));
    }
    Ok(a)
}

/// Lower bound for `0 < alpha < 1/2`.
pub fn lower_case1(params: &ChannelParams, mu_star: f64) -> Result<BoundValue> {
    let (a, alpha) = active_alpha(params, false)?;
    if !(mu_star > 0.0) {
        return Err(domain("mu* must be positive"));
    }
    let snr_log = 2.0 * (a / params.sigma()).ln();
    let shape = (-(-mu_star).exp_m1() / mu_star).ln();
    let t = snr_log + 2.0 * alpha * mu_star - (2.0 * PI * E).ln() + 2.0 * shape;
    Ok(BoundValue::new(BoundSource::Case1Lower, 0.5 * softplus(t)).with_param("mu_star", mu_star))
}

/// Gaussian-output upper bound for `0 < alpha <= 1/2`.
pub fn upper_case1_low(params: &ChannelParams) -> Result<BoundValue> {
    let (a, alpha) = active_alpha(params, true)?;
    let snr = a / params.sigma();
    let v = 0.5 * (alpha * (1.0 - alpha) * snr * snr).ln_1p();
    Ok(BoundValue::new(BoundSource::Case1UpperLow, v))
}

/// High-power upper bound for `0 < alpha < 1/2` with free `delta, mu > 0`.
pub fn upper_case1_high(params: &ChannelParams, delta: f64, mu: f64) -> Result<BoundValue> {
    let (a, alpha) = active_alpha(params, false)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(domain(format!("delta must be positive, got {delta}")));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(domain(format!("mu must be positive, got {mu}")));
    }
    let s = params.sigma();
    let d = delta / s;

    let weight = 1.0 - q((delta + alpha * a) / s) - q((delta + (1.0 - alpha) * a) / s);
    let log_arg = (a / s).ln() + ln_sub_exp(mu * delta / a, -mu * (1.0 + delta / a))
        - LN_SQRT_2PI
        - mu.ln()
        - one_minus_two_q(d).ln();
    let tails = -0.5 + q(d) + d * std_normal_pdf(d);
    let edge = (s / a) * mu * (std_normal_pdf(d) - std_normal_pdf((a + delta) / s));
    let tilt = mu * alpha * one_minus_two_q((delta + 0.5 * a) / s);

    let v = weight * log_arg + tails + edge + tilt;
    if !v.is_finite() {
        return Err(domain("upper bound evaluated to a non-finite value"));
    }
    Ok(BoundValue::new(BoundSource::Case1UpperHigh, v)
        .with_param("delta", delta)
        .with_param("mu", mu))
}

/// Suggested `(delta, mu)` for [`upper_case1_high`]:
/// `delta = sigma ln(1 + A/sigma)`, `mu = mu* (1 - e^{-alpha delta^2 / (2 sigma^2)})`.
///
/// At extremely small `A / sigma` the returned `mu` underflows to zero; the
/// bound is then undefined and the caller falls back to the low-power bound.
pub fn heuristic_case1(params: &ChannelParams) -> Result<(f64, f64)> {
    let (a, alpha) = active_alpha(params, false)?;
    let s = params.sigma();
    let delta = s * (a / s).ln_1p();
    let mu = mu_star(alpha)? * -(-alpha * delta * delta / (2.0 * s * s)).exp_m1();
    Ok((delta, mu))
}

/// Uniform-input lower bound for `1/2 <= alpha <= 1`.
pub fn lower_case2(params: &ChannelParams) -> Result<BoundValue> {
    let a = inactive_peak(params)?;
    let snr = a / params.sigma();
    let v = 0.5 * (snr * snr / (2.0 * PI * E)).ln_1p();
    Ok(BoundValue::new(BoundSource::Case2Lower, v))
}

pub fn upper_case2_low(params: &ChannelParams) -> Result<BoundValue> {
    let a = inactive_peak(params)?;
    let snr = a / params.sigma();
    Ok(BoundValue::new(
        BoundSource::Case2UpperLow,
        0.5 * (0.25 * snr * snr).ln_1p(),
    ))
}

/// High-power upper bound for `1/2 <= alpha <= 1` with free `delta > 0`.
pub fn upper_case2_high(params: &ChannelParams, delta: f64) -> Result<BoundValue> {
    let a = inactive_peak(params)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(domain(format!("delta must be positive, got {delta}")));
    }
    let s = params.sigma();
    let d = delta / s;
    let weight = one_minus_two_q((delta + 0.5 * a) / s);
    let log_arg = (a + 2.0 * delta).ln() - s.ln() - LN_SQRT_2PI - one_minus_two_q(d).ln();
    let v = weight * log_arg - 0.5 + q(d) + d * std_normal_pdf(d);
    if !v.is_finite() {
        return Err(domain("upper bound evaluated to a non-finite value"));
    }
    Ok(BoundValue::new(BoundSource::Case2UpperHigh, v).with_param("delta", delta))
}

/// Suggested `delta = sigma ln(1 + A/sigma)` for [`upper_case2_high`].
pub fn heuristic_case2(params: &ChannelParams) -> Result<f64> {
    let a = params.require_peak()?;
    let s = params.sigma();
    Ok(s * (a / s).ln_1p())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1(snr: f64, alpha: f64) -> ChannelParams {
        ChannelParams::with_alpha(snr, alpha, 1.0).unwrap()
    }

    // Bisection over 10^6 equal cells of (0, 100], then within the cell.
    fn mu_star_oracle(alpha: f64) -> f64 {
        let g = |mu: f64| 1.0 / mu - (-mu).exp() / (1.0 - (-mu).exp()) - alpha;
        let n = 1_000_000;
        let h = 100.0 / n as f64;
        let mut cell = None;
        for i in 1..n {
            let (x0, x1) = (i as f64 * h, (i + 1) as f64 * h);
            if g(x0) >= 0.0 && g(x1) < 0.0 {
                cell = Some((x0, x1));
                break;
            }
        }
        let (mut lo, mut hi) = cell.expect("sign change");
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn mu_star_matches_exhaustive_bisection() {
        for alpha in [0.1, 0.25] {
            let got = mu_star(alpha).unwrap();
            let oracle = mu_star_oracle(alpha);
            assert!(
                (got - oracle).abs() < 1e-10,
                "alpha={alpha}: {got} vs {oracle}"
            );
            assert!(mu_star_residual(alpha, got).abs() < 1e-12);
        }
    }

    #[test]
    fn mu_star_tends_to_zero_near_half() {
        let a = mu_star(0.499).unwrap();
        let b = mu_star(0.49).unwrap();
        let c = mu_star(0.4).unwrap();
        assert!(a < b && b < c);
        assert!(a < 0.02);
    }

    #[test]
    fn mu_star_domain() {
        assert!(mu_star(0.5).is_err());
        assert!(mu_star(0.0).is_err());
        assert!(mu_star(0.7).is_err());
    }

    #[test]
    fn series_and_direct_forms_agree() {
        for mu in [0.049, 0.05, 0.051] {
            let direct = 1.0 / mu - 1.0 / f64::exp_m1(mu);
            let series = {
                let m2 = mu * mu;
                0.5 - mu / 12.0 + mu * m2 / 720.0 - mu * m2 * m2 / 30_240.0
            };
            assert!((direct - series).abs() < 1e-13);
        }
    }

    #[test]
    fn lower_case1_high_snr_offset() {
        let alpha = 0.1;
        let m = mu_star(alpha).unwrap();
        let snr: f64 = 1e7;
        let v = lower_case1(&p1(snr, alpha), m).unwrap().nats;
        let offset = -0.5 * (2.0 * PI * E).ln() + alpha * m + ((1.0 - (-m).exp()) / m).ln();
        assert!((v - snr.ln() - offset).abs() < 1e-9);
    }

    #[test]
    fn lower_case1_direct_formula() {
        // Straight transcription at A = sigma = 1, alpha = 0.1.
        let alpha = 0.1;
        let m = mu_star(alpha).unwrap();
        let expected = 0.5
            * (1.0 + (2.0 * alpha * m).exp() / (2.0 * PI * E) * ((1.0 - (-m).exp()) / m).powi(2))
                .ln();
        let got = lower_case1(&p1(1.0, alpha), m).unwrap().nats;
        assert!((got - expected).abs() < 1e-14);
    }

    #[test]
    fn upper_case1_low_examples() {
        let v = upper_case1_low(&p1(1.0, 0.1)).unwrap().nats;
        assert!((v - 0.5 * 1.09f64.ln()).abs() < 1e-15);
        let half = upper_case1_low(&p1(3.0, 0.5)).unwrap().nats;
        let case2 = upper_case2_low(&p1(3.0, 0.5)).unwrap().nats;
        assert!((half - case2).abs() < 1e-15);
        let tiny = 1e-4;
        let v = upper_case1_low(&p1(tiny, 0.3)).unwrap().nats;
        assert!((v / (tiny * tiny) - 0.3 * 0.7 / 2.0).abs() < 1e-6);
    }

    #[test]
    fn heuristic_case1_values() {
        let snr = E - 1.0;
        let (delta, _) = heuristic_case1(&p1(snr, 0.2)).unwrap();
        assert!((delta - 1.0).abs() < 1e-14);
        let (_, mu) = heuristic_case1(&p1(1e8, 0.2)).unwrap();
        assert!((mu - mu_star(0.2).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn heuristic_case1_degenerates_at_tiny_peak() {
        let p = p1(1e-200, 0.2);
        let (delta, mu) = heuristic_case1(&p).unwrap();
        assert!(delta > 0.0 && delta < 1e-199);
        assert_eq!(mu, 0.0);
        assert!(upper_case1_high(&p, delta, mu).is_err());
    }

    #[test]
    fn upper_case1_high_rejects_bad_parameters() {
        let p = p1(5.0, 0.2);
        assert!(upper_case1_high(&p, 0.0, 1.0).is_err());
        assert!(upper_case1_high(&p, 1.0, -1.0).is_err());
        assert!(upper_case1_high(&p1(5.0, 0.6), 1.0, 1.0).is_err());
    }

    #[test]
    fn case2_examples() {
        let v = lower_case2(&p1(1.0, 0.5)).unwrap().nats;
        assert!((v - 0.5 * (1.0 + 1.0 / (2.0 * PI * E)).ln()).abs() < 1e-15);
        let v = upper_case2_low(&p1(2.0, 0.7)).unwrap().nats;
        assert!((v - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert!(lower_case2(&p1(1.0, 0.3)).is_err());
        for snr in [1e-3, 0.1, 1.0, 10.0, 1e3] {
            let p = p1(snr, 1.0);
            assert!(lower_case2(&p).unwrap().nats < upper_case2_low(&p).unwrap().nats);
        }
    }

    #[test]
    fn upper_case2_high_direct_formula() {
        // Straight transcription at A/sigma = 10 with the suggested delta.
        let a: f64 = 10.0;
        let delta = (1.0 + a).ln();
        let qf = |x: f64| 0.5 * libm::erfc(x / 2f64.sqrt());
        let expected = (1.0 - 2.0 * qf(delta + a / 2.0))
            * ((a + 2.0 * delta) / ((2.0 * PI).sqrt() * (1.0 - 2.0 * qf(delta)))).ln()
            - 0.5
            + qf(delta)
            + delta / (2.0 * PI).sqrt() * (-delta * delta / 2.0).exp();
        let got = upper_case2_high(&p1(a, 0.5), delta).unwrap().nats;
        assert!((got - expected).abs() < 1e-13, "{got} vs {expected}");
    }

    #[test]
    fn upper_case1_high_direct_formula() {
        let (a, alpha): (f64, f64) = (7.0, 0.25);
        let p = p1(a, alpha);
        let (delta, mu) = heuristic_case1(&p).unwrap();
        let qf = |x: f64| 0.5 * libm::erfc(x / 2f64.sqrt());
        let r2p = (2.0 * PI).sqrt();
        let expected = (1.0 - qf(delta + alpha * a) - qf(delta + (1.0 - alpha) * a))
            * (a * ((mu * delta / a).exp() - (-mu * (1.0 + delta / a)).exp())
                / (r2p * mu * (1.0 - 2.0 * qf(delta))))
            .ln()
            - 0.5
            + qf(delta)
            + delta / r2p * (-delta * delta / 2.0).exp()
            + 1.0 / a * mu / r2p
                * ((-delta * delta / 2.0).exp() - (-(a + delta).powi(2) / 2.0).exp())
            + mu * alpha * (1.0 - 2.0 * qf(delta + a / 2.0));
        let got = upper_case1_high(&p, delta, mu).unwrap().nats;
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn upper_case1_high_finite_at_extreme_snr() {
        let p = p1(1e12, 0.1);
        let (delta, mu) = heuristic_case1(&p).unwrap();
        assert!(upper_case1_high(&p, delta, mu).unwrap().nats.is_finite());
    }
}
