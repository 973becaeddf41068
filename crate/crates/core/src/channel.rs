//! Channel parameters, constraint regimes and the Gaussian channel law.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, ensure_finite, Error, Result};
use crate::numerics::special::normal_pdf;

/// Peak amplitude `A`, average amplitude `E` and noise standard deviation
/// `sigma`, all in the same units. A missing peak means the input is only
/// subject to the average constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    peak: Option<f64>,
    average: f64,
    sigma: f64,
}

impl ChannelParams {
    /// Peak- and average-constrained channel; requires `0 < E <= A`.
    pub fn peak_average(peak: f64, average: f64, sigma: f64) -> Result<Self> {
        ensure_finite("peak", peak)?;
        check_common(average, sigma)?;
        if !(peak > 0.0) {
            return Err(Error::InvalidParams(format!(
                "peak must be positive, got {peak}"
            )));
        }
        if average > peak {
            return Err(Error::InvalidParams(format!(
                "average {average} exceeds peak {peak} (alpha must lie in (0, 1])"
            )));
        }
        Ok(Self {
            peak: Some(peak),
            average,
            sigma,
        })
    }

    /// Channel with the peak given and `E = alpha * A`.
    pub fn with_alpha(peak: f64, alpha: f64, sigma: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        Self::peak_average(peak, alpha * peak, sigma)
    }

    /// Average-constrained channel without a peak constraint.
    pub fn average_only(average: f64, sigma: f64) -> Result<Self> {
        check_common(average, sigma)?;
        Ok(Self {
            peak: None,
            average,
            sigma,
        })
    }

    pub fn peak(&self) -> Option<f64> {
        self.peak
    }

    pub fn average(&self) -> f64 {
        self.average
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Average-to-peak ratio `E / A`, absent without a peak constraint.
    pub fn alpha(&self) -> Option<f64> {
        self.peak.map(|a| self.average / a)
    }

    /// Peak amplitude, or a domain error for the average-only channel.
    pub(crate) fn require_peak(&self) -> Result<f64> {
        self.peak
            .ok_or_else(|| domain("bound requires a peak-power constraint"))
    }

    pub fn law(&self) -> ChannelLaw {
        ChannelLaw { sigma: self.sigma }
    }

    /// The same channel with every amplitude multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        match self.peak {
            Some(a) => Self::peak_average(c * a, c * self.average, c * self.sigma),
            None => Self::average_only(c * self.average, c * self.sigma),
        }
    }
}

fn check_common(average: f64, sigma: f64) -> Result<()> {
    ensure_finite("average", average)?;
    ensure_finite("sigma", sigma)?;
    if !(sigma > 0.0) {
        return Err(Error::InvalidParams(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if !(average > 0.0) {
        return Err(Error::InvalidParams(format!(
            "average must be positive, got {average}"
        )));
    }
    Ok(())
}

/// Which set of bounds applies.
///
/// For `alpha > 1/2` the average constraint is inactive and the channel
/// behaves exactly as with `alpha = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CaseLabel {
    /// `0 < alpha < 1/2`: both constraints bind.
    ActiveAverage { alpha: f64 },
    /// `1/2 <= alpha <= 1`: evaluated at the clamped ratio `1/2`.
    InactiveAverage,
    /// No peak constraint.
    AverageOnly,
}

impl CaseLabel {
    pub fn effective_alpha(&self) -> Option<f64> {
        match *self {
            CaseLabel::ActiveAverage { alpha } => Some(alpha),
            CaseLabel::InactiveAverage => Some(0.5),
            CaseLabel::AverageOnly => None,
        }
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            CaseLabel::ActiveAverage { .. } => "active-average",
            CaseLabel::InactiveAverage => "inactive-average",
            CaseLabel::AverageOnly => "average-only",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::ActiveAverage { alpha } => write!(f, "active-average (alpha = {alpha})"),
            other => f.write_str(other.short_name()),
        }
    }
}

pub fn classify(params: &ChannelParams) -> CaseLabel {
    match params.alpha() {
        None => CaseLabel::AverageOnly,
        Some(alpha) if alpha < 0.5 => CaseLabel::ActiveAverage { alpha },
        Some(_) => CaseLabel::InactiveAverage,
    }
}

/// Additive Gaussian noise channel: output `x + Z`, `Z ~ N(0, sigma^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelLaw {
    pub sigma: f64,
}

impl ChannelLaw {
    pub fn new(sigma: f64) -> Result<Self> {
        ensure_finite("sigma", sigma)?;
        if sigma <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        Ok(Self { sigma })
    }
}

/// Output density at `y` given input `x >= 0`.
pub fn conditional_density(law: &ChannelLaw, x: f64, y: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    ensure_finite("y", y)?;
    if x < 0.0 {
        return Err(domain(format!(
            "channel input must be nonnegative, got {x}"
        )));
    }
    Ok(normal_pdf(y, x, law.sigma))
}

/// How a dB figure maps to the amplitude ratio `A / sigma` (or `E / sigma`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DbConvention {
    /// `dB = 10 log10(A / sigma)`.
    #[default]
    Power10,
    /// `dB = 20 log10(A / sigma)`.
    Amplitude20,
}

impl DbConvention {
    pub fn ratio_from_db(self, db: f64) -> f64 {
        match self {
            DbConvention::Power10 => 10f64.powf(db / 10.0),
            DbConvention::Amplitude20 => 10f64.powf(db / 20.0),
        }
    }

    pub fn db_from_ratio(self, ratio: f64) -> f64 {
        match self {
            DbConvention::Power10 => 10.0 * ratio.log10(),
            DbConvention::Amplitude20 => 20.0 * ratio.log10(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DbConvention::Power10 => "power10",
            DbConvention::Amplitude20 => "amplitude20",
        }
    }
}

impl std::str::FromStr for DbConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power10" => Ok(DbConvention::Power10),
            "amplitude20" => Ok(DbConvention::Amplitude20),
            other => Err(domain(format!("unknown dB convention '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_adaptive, QuadratureConfig};
    use std::f64::consts::PI;

    #[test]
    fn classify_examples() {
        let p = ChannelParams::peak_average(10.0, 1.0, 1.0).unwrap();
        let case = classify(&p);
        assert!(matches!(case, CaseLabel::ActiveAverage { .. }));
        assert!((case.effective_alpha().unwrap() - 0.1).abs() < 1e-15);

        let p = ChannelParams::peak_average(10.0, 8.0, 1.0).unwrap();
        assert_eq!(classify(&p), CaseLabel::InactiveAverage);
        assert_eq!(classify(&p).effective_alpha(), Some(0.5));

        let p = ChannelParams::average_only(1.0, 1.0).unwrap();
        assert_eq!(classify(&p), CaseLabel::AverageOnly);
        assert_eq!(classify(&p).effective_alpha(), None);
    }

    #[test]
    fn half_is_inactive_case() {
        let p = ChannelParams::with_alpha(3.0, 0.5, 1.0).unwrap();
        assert_eq!(classify(&p), CaseLabel::InactiveAverage);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(ChannelParams::peak_average(1.0, 2.0, 1.0).is_err());
        assert!(ChannelParams::peak_average(1.0, 0.5, 0.0).is_err());
        assert!(ChannelParams::peak_average(-1.0, 0.5, 1.0).is_err());
        assert!(ChannelParams::average_only(0.0, 1.0).is_err());
        assert!(ChannelParams::average_only(f64::NAN, 1.0).is_err());
        assert!(ChannelParams::with_alpha(1.0, 1.5, 1.0).is_err());
    }

    #[test]
    fn conditional_density_values() {
        let law = ChannelLaw::new(1.0).unwrap();
        let v = conditional_density(&law, 0.0, 0.0).unwrap();
        assert!((v - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        let law = ChannelLaw::new(0.5).unwrap();
        let v = conditional_density(&law, 2.0, 2.0).unwrap();
        assert!((v - 1.0 / ((2.0 * PI).sqrt() * 0.5)).abs() < 1e-15);
        assert!(conditional_density(&law, -0.1, 0.0).is_err());
    }

    #[test]
    fn conditional_density_normalizes() {
        let law = ChannelLaw::new(0.7).unwrap();
        let cfg = QuadratureConfig::default();
        for x in [0.0, 1.3, 12.0] {
            let total = integrate_adaptive(
                |y| conditional_density(&law, x, y).unwrap(),
                x - 12.0,
                x + 12.0,
                &cfg,
            )
            .unwrap();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn db_conventions() {
        assert!((DbConvention::Power10.ratio_from_db(20.0) - 100.0).abs() < 1e-12);
        assert!((DbConvention::Amplitude20.ratio_from_db(20.0) - 10.0).abs() < 1e-12);
        for c in [DbConvention::Power10, DbConvention::Amplitude20] {
            let r = 3.7;
            assert!((c.ratio_from_db(c.db_from_ratio(r)) - r).abs() < 1e-12);
            assert_eq!(c.name().parse::<DbConvention>().unwrap(), c);
        }
    }
}
