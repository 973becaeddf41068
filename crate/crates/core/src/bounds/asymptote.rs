//! High- and low-SNR behavior of the capacity.

use std::f64::consts::{E, PI};

use serde::Serialize;

use super::peak::mu_star;
use crate::channel::CaseLabel;
use crate::error::Result;

/// How capacity behaves as the SNR tends to zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowSnrBehavior {
    /// `C ~ coefficient * (A / sigma)^2`.
    Coefficient(f64),
    /// Only an envelope is known: the ratio of capacity to
    /// `(E / sigma) sqrt(ln(sigma / E))` stays within `[lower, upper]`
    /// in the limit.
    Envelope { lower: f64, upper: f64 },
}

/// Asymptotic description of one regime. At high SNR the capacity behaves
/// as `ln(A / sigma) + high_snr_offset` (with `E` in place of `A` for the
/// average-only channel).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoteValue {
    pub high_snr_offset: f64,
    pub low_snr: LowSnrBehavior,
}

/// Closed-form asymptotes for a regime.
pub fn asymptote(case: CaseLabel) -> Result<AsymptoteValue> {
    let half_ln_2pie = 0.5 * (2.0 * PI * E).ln();
    Ok(match case {
        CaseLabel::ActiveAverage { alpha } => {
            let m = mu_star(alpha)?;
            // 1 - alpha mu* = mu* e^{-mu*} / (1 - e^{-mu*}); the right-hand
            // side avoids cancellation when alpha mu* is close to one.
            let log_gap = if alpha * m < 0.9 {
                (-alpha * m).ln_1p()
            } else {
                m.ln() - m - (-(-m).exp_m1()).ln()
            };
            AsymptoteValue {
                high_snr_offset: -half_ln_2pie - (1.0 - alpha) * m - log_gap,
                low_snr: LowSnrBehavior::Coefficient(0.5 * alpha * (1.0 - alpha)),
            }
        }
        CaseLabel::InactiveAverage => AsymptoteValue {
            high_snr_offset: -half_ln_2pie,
            low_snr: LowSnrBehavior::Coefficient(0.125),
        },
        CaseLabel::AverageOnly => AsymptoteValue {
            high_snr_offset: 0.5 * (E / (2.0 * PI)).ln(),
            low_snr: LowSnrBehavior::Envelope {
                lower: 1.0 / 2f64.sqrt(),
                upper: 2.0,
            },
        },
    })
}
