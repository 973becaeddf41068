//! Evaluating every bound of a regime and picking the tightest pair.

use std::f64::consts::E;

use serde::Serialize;

use super::average::{
    heuristic_case3_high, heuristic_case3_low, lower_case3, upper_case3_high, upper_case3_low,
};
use super::peak::{
    heuristic_case1, heuristic_case2, lower_case1, lower_case2, mu_star, upper_case1_high,
    upper_case1_low, upper_case2_high, upper_case2_low,
};
use super::BoundValue;
use crate::channel::{classify, CaseLabel, ChannelParams};
use crate::error::Result;
use crate::numerics::refine_min;
use crate::oracle::on_off_keying;

/// How the free parameters of the upper bounds are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMode {
    /// Closed-form suggested parameters only.
    #[default]
    Heuristic,
    /// Start from the suggested parameters and minimize each upper bound
    /// by coordinate-wise golden-section search. For the average-only
    /// channel the on-off keying rate is also offered as a lower bound.
    Refined,
}

/// All bounds of one regime at one operating point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSet {
    pub case: CaseLabel,
    pub lower: BoundValue,
    /// Absent for the average-only channel above the validity limit of
    /// its low-power bound.
    pub upper_low: Option<BoundValue>,
    /// Absent when the suggested parameters degenerate (peak far below
    /// the noise level).
    pub upper_high: Option<BoundValue>,
    /// Extra achievable rate used in refined mode.
    pub extra_lower: Option<BoundValue>,
    pub best_lower: BoundValue,
    pub best_upper: BoundValue,
}

/// Evaluate every bound that applies to `params`.
pub fn evaluate_bounds(params: &ChannelParams, mode: BoundMode) -> Result<BoundSet> {
    let case = classify(params);
    let refine = mode == BoundMode::Refined;
    let (lower, upper_low, upper_high, extra_lower) = match case {
        CaseLabel::ActiveAverage { alpha } => {
            let lower = lower_case1(params, mu_star(alpha)?)?;
            let (delta, mu) = heuristic_case1(params)?;
            let high = if delta > 0.0 && mu > 0.0 {
                let eval = |p: &[f64]| upper_case1_high(params, p[0], p[1]);
                let start = if refine {
                    let limits = [(f64::MIN_POSITIVE, f64::INFINITY); 2];
                    refine_min(
                        |p| eval(p).map_or(f64::INFINITY, |b| b.nats),
                        &[delta, mu],
                        &limits,
                    )
                } else {
                    vec![delta, mu]
                };
                eval(&start).ok()
            } else {
                None
            };
            (lower, Some(upper_case1_low(params)?), high, None)
        }
        CaseLabel::InactiveAverage => {
            let lower = lower_case2(params)?;
            let delta = heuristic_case2(params)?;
            let p = if refine {
                let limits = [(f64::MIN_POSITIVE, f64::INFINITY)];
                let f =
                    |p: &[f64]| upper_case2_high(params, p[0]).map_or(f64::INFINITY, |b| b.nats);
                refine_min(f, &[delta], &limits)
            } else {
                vec![delta]
            };
            let high = upper_case2_high(params, p[0]).ok();
            (lower, Some(upper_case2_low(params)?), high, None)
        }
        CaseLabel::AverageOnly => {
            let lower = lower_case3(params)?;
            let s = params.sigma();
            let low = match heuristic_case3_low(params)? {
                Some((delta, beta)) => {
                    let p = if refine {
                        let limits = [
                            (f64::NEG_INFINITY, -s / E.sqrt()),
                            (f64::MIN_POSITIVE, f64::INFINITY),
                        ];
                        let f = |p: &[f64]| {
                            upper_case3_low(params, p[0], p[1]).map_or(f64::INFINITY, |b| b.nats)
                        };
                        refine_min(f, &[delta, beta], &limits)
                    } else {
                        vec![delta, beta]
                    };
                    Some(upper_case3_low(params, p[0], p[1])?)
                }
                None => None,
            };
            let (delta, beta) = heuristic_case3_high(params)?;
            let p = if refine {
                let limits = [(0.0, f64::INFINITY), (f64::MIN_POSITIVE, f64::INFINITY)];
                let f = |p: &[f64]| {
                    upper_case3_high(params, p[0], p[1]).map_or(f64::INFINITY, |b| b.nats)
                };
                refine_min(f, &[delta, beta], &limits)
            } else {
                vec![delta, beta]
            };
            let high = upper_case3_high(params, p[0], p[1])?;
            let extra = if refine {
                Some(on_off_keying(params)?)
            } else {
                None
            };
            (lower, low, Some(high), extra)
        }
    };

    let mut best_lower = lower.clone();
    if let Some(extra) = &extra_lower {
        if extra.nats > best_lower.nats {
            best_lower = extra.clone();
        }
    }
    let best_upper = [&upper_low, &upper_high]
        .into_iter()
        .flatten()
        .min_by(|a, b| a.nats.total_cmp(&b.nats))
        .cloned()
        .expect("every regime has at least one upper bound");

    Ok(BoundSet {
        case,
        lower,
        upper_low,
        upper_high,
        extra_lower,
        best_lower,
        best_upper,
    })
}

/// Tightest lower and upper bound, with refined free parameters.
pub fn best_bounds(params: &ChannelParams) -> Result<(BoundValue, BoundValue)> {
    let set = evaluate_bounds(params, BoundMode::Refined)?;
    Ok((set.best_lower, set.best_upper))
}
