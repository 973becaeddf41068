//! Output densities behind the upper bounds and the duality check.
//!
//! For any output density `R`, `E[D(W(.|X) || R)]` is at least `I(X; Y)`,
//! and its supremum over feasible inputs bounds the capacity.

use serde::{Deserialize, Serialize};

use super::information::{log_sum_exp, SPAN};
use super::input::DiscreteInputDistribution;
use crate::bounds::log_add_exp;
use crate::channel::{ChannelLaw, ChannelParams};
use crate::error::{domain, ensure_finite, Result};
use crate::numerics::special::{ln_sub_exp, log_q, normal_log_pdf, one_minus_two_q, LN_SQRT_2PI};
use crate::numerics::{gaussian_entropy, integrate_adaptive_with_breaks, QuadratureConfig};

/// A probability density on the real line, evaluated in the log domain.
pub trait OutputDensity {
    fn log_density(&self, y: f64) -> f64;

    fn density(&self, y: f64) -> f64 {
        self.log_density(y).exp()
    }

    /// Points where the density is not smooth, plus its center; used as
    /// quadrature breakpoints.
    fn knots(&self) -> Vec<f64>;

    fn check(&self) -> Result<()> {
        Ok(())
    }
}

/// The five parametric output densities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum OutputDensitySpec {
    /// Gaussian with mean `E` and variance `sigma^2 + E (A - E)`.
    Case1Low { params: ChannelParams },
    /// Gaussian tails outside `[-delta, A + delta]`, a decaying exponential
    /// with rate `mu / A` inside.
    Case1High {
        params: ChannelParams,
        delta: f64,
        mu: f64,
    },
    /// Gaussian with mean `A / 2` and variance `sigma^2 + A^2 / 4`.
    Case2Low { params: ChannelParams },
    /// Gaussian tails outside `[-delta, A + delta]`, uniform inside.
    Case2High { params: ChannelParams, delta: f64 },
    /// Gaussian left tail below `-delta`, exponential with mean `beta`
    /// above it.
    Case3 {
        params: ChannelParams,
        delta: f64,
        beta: f64,
    },
}

impl OutputDensitySpec {
    fn peak(&self) -> Result<f64> {
        match self {
            OutputDensitySpec::Case1Low { params }
            | OutputDensitySpec::Case2Low { params }
            | OutputDensitySpec::Case1High { params, .. }
            | OutputDensitySpec::Case2High { params, .. } => params.require_peak(),
            OutputDensitySpec::Case3 { .. } => Ok(f64::NAN),
        }
    }

    fn sigma(&self) -> f64 {
        match self {
            OutputDensitySpec::Case1Low { params }
            | OutputDensitySpec::Case2Low { params }
            | OutputDensitySpec::Case1High { params, .. }
            | OutputDensitySpec::Case2High { params, .. }
            | OutputDensitySpec::Case3 { params, .. } => params.sigma(),
        }
    }

    fn gaussian(&self) -> Option<(f64, f64)> {
        let s = self.sigma();
        match *self {
            OutputDensitySpec::Case1Low { params } => {
                let (a, e) = (params.peak()?, params.average());
                Some((e, (s * s + e * (a - e)).sqrt()))
            }
            OutputDensitySpec::Case2Low { params } => {
                let a = params.peak()?;
                Some((0.5 * a, (s * s + 0.25 * a * a).sqrt()))
            }
            _ => None,
        }
    }
}

/// Density of `spec` at `y`, after validating its parameters.
pub fn output_density(spec: &OutputDensitySpec, y: f64) -> Result<f64> {
    spec.check()?;
    ensure_finite("y", y)?;
    Ok(spec.density(y))
}

impl OutputDensity for OutputDensitySpec {
    fn check(&self) -> Result<()> {
        self.peak()?;
        match *self {
            OutputDensitySpec::Case1High { delta, mu, .. } => {
                if !(delta > 0.0 && delta.is_finite() && mu > 0.0 && mu.is_finite()) {
                    return Err(domain(format!(
                        "need delta > 0 and mu > 0, got {delta}, {mu}"
                    )));
                }
            }
            OutputDensitySpec::Case2High { delta, .. } => {
                if !(delta > 0.0 && delta.is_finite()) {
                    return Err(domain(format!("need delta > 0, got {delta}")));
                }
            }
            OutputDensitySpec::Case3 { delta, beta, .. } => {
                ensure_finite("delta", delta)?;
                if !(beta > 0.0 && beta.is_finite()) {
                    return Err(domain(format!("need beta > 0, got {beta}")));
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn log_density(&self, y: f64) -> f64 {
        if let Some((mean, sd)) = self.gaussian() {
            return normal_log_pdf(y, mean, sd);
        }
        let s = self.sigma();
        match *self {
            OutputDensitySpec::Case1High { params, delta, mu } => {
                let a = params.peak().unwrap_or(f64::NAN);
                if y < -delta {
                    normal_log_pdf(y, 0.0, s)
                } else if y > a + delta {
                    normal_log_pdf(y, a, s)
                } else {
                    (mu / a).ln() + one_minus_two_q(delta / s).ln()
                        - ln_sub_exp(mu * delta / a, -mu * (1.0 + delta / a))
                        - mu * y / a
                }
            }
            OutputDensitySpec::Case2High { params, delta } => {
                let a = params.peak().unwrap_or(f64::NAN);
                if y < -delta {
                    normal_log_pdf(y, 0.0, s)
                } else if y > a + delta {
                    normal_log_pdf(y, a, s)
                } else {
                    one_minus_two_q(delta / s).ln() - (a + 2.0 * delta).ln()
                }
            }
            OutputDensitySpec::Case3 { delta, beta, .. } => {
                let d = delta / s;
                let log_norm =
                    log_add_exp(beta.ln() - 0.5 * d * d, LN_SQRT_2PI + s.ln() + log_q(d));
                if y < -delta {
                    -0.5 * (y / s) * (y / s) - log_norm
                } else {
                    -0.5 * d * d - (y + delta) / beta - log_norm
                }
            }
            OutputDensitySpec::Case1Low { .. } | OutputDensitySpec::Case2Low { .. } => {
                unreachable!("handled above")
            }
        }
    }

    fn knots(&self) -> Vec<f64> {
        if let Some((mean, _)) = self.gaussian() {
            return vec![mean];
        }
        match *self {
            OutputDensitySpec::Case1High { params, delta, .. }
            | OutputDensitySpec::Case2High { params, delta } => {
                vec![-delta, params.peak().unwrap_or(0.0) + delta]
            }
            OutputDensitySpec::Case3 { delta, .. } => vec![-delta],
            _ => Vec::new(),
        }
    }
}

/// The output density induced by a discrete input.
#[derive(Debug, Clone)]
pub struct MixtureDensity {
    dist: DiscreteInputDistribution,
    sigma: f64,
}

impl MixtureDensity {
    pub fn new(dist: DiscreteInputDistribution, law: &ChannelLaw) -> Self {
        Self {
            dist,
            sigma: law.sigma,
        }
    }
}

impl OutputDensity for MixtureDensity {
    fn log_density(&self, y: f64) -> f64 {
        let s = self.sigma;
        let terms = self
            .dist
            .points()
            .iter()
            .zip(self.dist.probs())
            .filter(|(_, &q)| q > 0.0)
            .map(move |(&x, &q)| q.ln() + normal_log_pdf(y, x, s));
        log_sum_exp(terms)
    }

    fn knots(&self) -> Vec<f64> {
        self.dist.points().to_vec()
    }
}

/// `sum_i q_i D(W(.|x_i) || R)`, each divergence computed as
/// `-h(W) - integral W ln R` with the cross term by adaptive quadrature
/// over `x_i +- 10 sigma`.
pub fn duality_gap<R: OutputDensity + ?Sized>(
    dist: &DiscreteInputDistribution,
    density: &R,
    law: &ChannelLaw,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    density.check()?;
    cfg.validate()?;
    let s = law.sigma;
    let neg_entropy = -gaussian_entropy(s);
    let knots = density.knots();
    let mut total = 0.0;
    for (&x, &q) in dist.points().iter().zip(dist.probs()) {
        if q == 0.0 {
            continue;
        }
        let (lo, hi) = (x - SPAN * s, x + SPAN * s);
        let mut breaks: Vec<f64> = vec![lo, x, hi];
        breaks.extend(knots.iter().copied().filter(|&k| k > lo && k < hi));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let cross = integrate_adaptive_with_breaks(
            |y| {
                let lr = density.log_density(y);
                let w = (normal_log_pdf(y, x, s)).exp();
                if w == 0.0 {
                    0.0
                } else {
                    w * lr
                }
            },
            &breaks,
            cfg,
        )?;
        if !cross.is_finite() {
            return Err(domain("relative entropy diverges for this output density"));
        }
        total += q * (neg_entropy - cross);
    }
    Ok(total)
}
