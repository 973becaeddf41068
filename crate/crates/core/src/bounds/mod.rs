//! Closed-form capacity bounds, their free-parameter heuristics and
//! asymptotic expressions.
//!
//! All values are in nats per channel use. Three regimes are covered (see
//! [`CaseLabel`](crate::channel::CaseLabel)):
//!
//! | regime | lower | upper (low power) | upper (high power) |
//! |---|---|---|---|
//! | `alpha < 1/2` | [`lower_case1`] | [`upper_case1_low`] | [`upper_case1_high`] |
//! | `alpha >= 1/2` | [`lower_case2`] | [`upper_case2_low`] | [`upper_case2_high`] |
//! | average only | [`lower_case3`] | [`upper_case3_low`] | [`upper_case3_high`] |
//!
//! The lower bounds come from maximum-entropy inputs pushed through the
//! entropy power inequality; the upper bounds from the duality bound with
//! the output densities in [`crate::oracle::density`].

mod asymptote;
mod average;
mod best;
mod peak;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

pub use asymptote::{asymptote, AsymptoteValue, LowSnrBehavior};
pub use average::{
    heuristic_case3_high, heuristic_case3_low, lower_case3, upper_case3_high, upper_case3_low,
    CASE3_LOW_HEURISTIC_LIMIT,
};
pub use best::{best_bounds, evaluate_bounds, BoundMode, BoundSet};
pub use peak::{
    heuristic_case1, heuristic_case2, lower_case1, lower_case2, mu_star, mu_star_residual,
    upper_case1_high, upper_case1_low, upper_case2_high, upper_case2_low,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
}

/// Which formula produced a [`BoundValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    /// Truncated-exponential input, `alpha < 1/2`.
    Case1Lower,
    /// Gaussian output law, `alpha < 1/2`.
    Case1UpperLow,
    /// Tilted-exponential output law with Gaussian tails, `alpha < 1/2`.
    Case1UpperHigh,
    /// Uniform input, `alpha >= 1/2`.
    Case2Lower,
    Case2UpperLow,
    /// Uniform output law with Gaussian tails, `alpha >= 1/2`.
    Case2UpperHigh,
    /// Exponential input, average constraint only.
    Case3Lower,
    /// Exponential output law, `delta <= -sigma / sqrt(e)`.
    Case3UpperLow,
    /// Exponential output law, `delta >= 0`.
    Case3UpperHigh,
    /// Mutual information of an on-off keyed input with optimized on level.
    OnOffKeying,
}

impl BoundSource {
    pub fn name(self) -> &'static str {
        match self {
            BoundSource::Case1Lower => "case1-lower",
            BoundSource::Case1UpperLow => "case1-upper-low",
            BoundSource::Case1UpperHigh => "case1-upper-high",
            BoundSource::Case2Lower => "case2-lower",
            BoundSource::Case2UpperLow => "case2-upper-low",
            BoundSource::Case2UpperHigh => "case2-upper-high",
            BoundSource::Case3Lower => "case3-lower",
            BoundSource::Case3UpperLow => "case3-upper-low",
            BoundSource::Case3UpperHigh => "case3-upper-high",
            BoundSource::OnOffKeying => "on-off-keying",
        }
    }

    pub fn kind(self) -> BoundKind {
        match self {
            BoundSource::Case1Lower
            | BoundSource::Case2Lower
            | BoundSource::Case3Lower
            | BoundSource::OnOffKeying => BoundKind::Lower,
            _ => BoundKind::Upper,
        }
    }
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A capacity bound together with the free parameters used to obtain it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundValue {
    pub nats: f64,
    pub kind: BoundKind,
    pub source: BoundSource,
    pub free_params: BTreeMap<&'static str, f64>,
    /// Set when a lower bound evaluated below zero and was clamped.
    pub clamped: bool,
}

impl BoundValue {
    pub(crate) fn new(source: BoundSource, nats: f64) -> Self {
        let kind = source.kind();
        let (nats, clamped) = if kind == BoundKind::Lower && nats < 0.0 {
            (0.0, true)
        } else {
            (nats, false)
        };
        Self {
            nats,
            kind,
            source,
            free_params: BTreeMap::new(),
            clamped,
        }
    }

    pub(crate) fn with_param(mut self, name: &'static str, value: f64) -> Self {
        self.free_params.insert(name, value);
        self
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.free_params.get(name).copied()
    }
}

/// `ln(1 + e^t)` without overflow.
#[inline]
pub(crate) fn softplus(t: f64) -> f64 {
    if t > 35.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// `ln(e^a + e^b)`.
#[inline]
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + ((a - hi).exp() + (b - hi).exp()).ln()
}
