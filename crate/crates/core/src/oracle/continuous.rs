//! Information rates of the continuous maximum-entropy inputs, whose
//! entropy-power relaxations give the closed-form lower bounds.

use crate::bounds::mu_star;
use crate::channel::{classify, CaseLabel, ChannelLaw, ChannelParams};
use crate::error::{domain, Result};
use crate::numerics::special::log_q;
use crate::numerics::{gaussian_entropy, integrate_adaptive_with_breaks, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContinuousInput {
    /// Density proportional to `e^{-rate x}` on `[0, peak]`.
    TruncatedExponential {
        peak: f64,
        rate: f64,
    },
    Uniform {
        peak: f64,
    },
    Exponential {
        mean: f64,
    },
}

/// `ln(Q(u) - Q(v))` for `u < v`.
fn log_q_diff(u: f64, v: f64) -> f64 {
    if u + v < 0.0 {
        // Both tails near one: use Q(u) - Q(v) = Q(-v) - Q(-u).
        return log_q_diff(-v, -u);
    }
    let (lu, lv) = (log_q(u), log_q(v));
    lu + (-(lv - lu).exp_m1()).ln()
}

impl ContinuousInput {
    /// The maximum-entropy input under the constraints of `params`.
    pub fn max_entropy(params: &ChannelParams) -> Result<Self> {
        Ok(match classify(params) {
            CaseLabel::ActiveAverage { alpha } => {
                let peak = params.require_peak()?;
                ContinuousInput::TruncatedExponential {
                    peak,
                    rate: mu_star(alpha)? / peak,
                }
            }
            CaseLabel::InactiveAverage => ContinuousInput::Uniform {
                peak: params.require_peak()?,
            },
            CaseLabel::AverageOnly => ContinuousInput::Exponential {
                mean: params.average(),
            },
        })
    }

    /// Log of the output density `integral f(x) phi_sigma(y - x) dx`.
    pub fn log_output_density(&self, y: f64, sigma: f64) -> f64 {
        let s = sigma;
        match *self {
            ContinuousInput::Uniform { peak } => log_q_diff((y - peak) / s, y / s) - peak.ln(),
            ContinuousInput::TruncatedExponential { peak, rate } => {
                let m = y - rate * s * s;
                (rate / -(-rate * peak).exp_m1()).ln() - rate * y
                    + 0.5 * (rate * s).powi(2)
                    + log_q_diff((m - peak) / s, m / s)
            }
            ContinuousInput::Exponential { mean } => {
                let rate = 1.0 / mean;
                let m = y - rate * s * s;
                rate.ln() - rate * y + 0.5 * (rate * s).powi(2) + log_q(-m / s)
            }
        }
    }

    fn integration_breaks(&self, s: f64) -> Vec<f64> {
        let right = match *self {
            ContinuousInput::Uniform { peak }
            | ContinuousInput::TruncatedExponential { peak, .. } => peak,
            ContinuousInput::Exponential { mean } => 40.0 * mean,
        };
        let mut b: Vec<f64> = vec![-10.0 * s, -3.0 * s, 0.0, 3.0 * s];
        b.extend([right - 3.0 * s, right, right + 3.0 * s, right + 10.0 * s]);
        b.sort_by(f64::total_cmp);
        b.dedup_by(|a, b| (*a - *b).abs() < 1e-3 * s);
        b.retain(|&x| x >= -10.0 * s);
        b
    }
}

/// `I(X; Y) = h(Y) - h(Z)` for a continuous input.
pub fn continuous_input_mi(
    input: &ContinuousInput,
    law: &ChannelLaw,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let s = law.sigma;
    match *input {
        ContinuousInput::Uniform { peak } | ContinuousInput::TruncatedExponential { peak, .. }
            if !(peak > 0.0) =>
        {
            return Err(domain("peak must be positive"));
        }
        ContinuousInput::Exponential { mean } if !(mean > 0.0) => {
            return Err(domain("mean must be positive"));
        }
        _ => {}
    }
    let breaks = input.integration_breaks(s);
    let h = integrate_adaptive_with_breaks(
        |y| {
            let lp = input.log_output_density(y, s);
            if lp == f64::NEG_INFINITY {
                0.0
            } else {
                -lp.exp() * lp
            }
        },
        &breaks,
        cfg,
    )?;
    Ok(h - gaussian_entropy(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_adaptive;
    use crate::numerics::special::normal_pdf;

    fn brute_output(input: &ContinuousInput, y: f64) -> f64 {
        let cfg = QuadratureConfig::default();
        match *input {
            ContinuousInput::Uniform { peak } => {
                integrate_adaptive(|x| normal_pdf(y, x, 1.0) / peak, 0.0, peak, &cfg).unwrap()
            }
            ContinuousInput::TruncatedExponential { peak, rate } => {
                let z = (1.0 - (-rate * peak).exp()) / rate;
                integrate_adaptive(
                    |x| (-rate * x).exp() / z * normal_pdf(y, x, 1.0),
                    0.0,
                    peak,
                    &cfg,
                )
                .unwrap()
            }
            ContinuousInput::Exponential { mean } => integrate_adaptive(
                |x| (-x / mean).exp() / mean * normal_pdf(y, x, 1.0),
                0.0,
                60.0 * mean + 20.0,
                &cfg,
            )
            .unwrap(),
        }
    }

    #[test]
    fn closed_form_output_densities_match_convolution() {
        let inputs = [
            ContinuousInput::Uniform { peak: 3.0 },
            ContinuousInput::TruncatedExponential {
                peak: 5.0,
                rate: 1.7,
            },
            ContinuousInput::Exponential { mean: 0.8 },
        ];
        for input in inputs {
            for y in [-4.0, -0.5, 0.0, 1.3, 4.0, 9.0] {
                let got = input.log_output_density(y, 1.0).exp();
                let want = brute_output(&input, y);
                assert!(
                    (got - want).abs() < 1e-12 * want.max(1e-3),
                    "{input:?} y={y}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn uniform_high_snr_entropy() {
        // h(Y) -> ln A for A >> sigma.
        let law = ChannelLaw::new(1.0).unwrap();
        let cfg = QuadratureConfig::default();
        let a: f64 = 1e4;
        let mi = continuous_input_mi(&ContinuousInput::Uniform { peak: a }, &law, &cfg).unwrap();
        assert!((mi - (a.ln() - gaussian_entropy(1.0))).abs() < 1e-3);
    }
}
