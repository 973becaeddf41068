//! Mutual information of discrete inputs over the Gaussian channel.

use crate::bounds::{BoundSource, BoundValue};
use crate::channel::{classify, ChannelLaw, ChannelParams};
use crate::error::{domain, Error, Result};
use crate::numerics::special::{normal_log_pdf, normal_pdf};
use crate::numerics::{
    gaussian_entropy, golden_section, integrate_adaptive_with_breaks, QuadratureConfig,
};

use super::input::DiscreteInputDistribution;

/// Integration half-width around each mass point, in units of sigma.
pub(crate) const SPAN: f64 = 10.0;
/// Mass points farther apart than this (in sigma) do not interact within
/// [`SPAN`] of each other at double precision.
const WINDOW: f64 = 50.0;

/// `ln(W(y|x_i) / p(y))` where `p` is the output mixture, computed as
/// `-ln sum_j q_j exp(((y-x_i)^2 - (y-x_j)^2) / (2 sigma^2))`. Zero-mass
/// points carry `ln q_j = -inf` and drop out.
fn log_ratio(
    points: &[f64],
    log_probs: &[f64],
    lo: usize,
    hi: usize,
    i: usize,
    y: f64,
    s: f64,
) -> f64 {
    let di = (y - points[i]) / s;
    let exponent = |j: usize| {
        let dj = (y - points[j]) / s;
        log_probs[j] + 0.5 * (di * di - dj * dj)
    };
    let m = (lo..hi).map(exponent).fold(f64::NEG_INFINITY, f64::max);
    let acc: f64 = (lo..hi).map(|j| (exponent(j) - m).exp()).sum();
    -(m + acc.ln())
}

fn window(points: &[f64], center: f64, half_width: f64) -> (usize, usize) {
    let lo = points.partition_point(|&x| x < center - half_width);
    let hi = points.partition_point(|&x| x <= center + half_width);
    (lo, hi)
}

/// Relative entropies `D(W(.|x_i) || p)` for every mass point, where `p`
/// is the output density induced by `dist`.
pub fn divergences(
    dist: &DiscreteInputDistribution,
    law: &ChannelLaw,
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    let s = law.sigma;
    let (points, probs) = (dist.points(), dist.probs());
    let log_probs: Vec<f64> = probs.iter().map(|q| q.ln()).collect();
    let steps: Vec<f64> = (-4..=4).map(|k| 2.5 * k as f64).collect();
    (0..points.len())
        .map(|i| {
            let xi = points[i];
            let (lo, hi) = window(points, xi, WINDOW * s);
            let breaks: Vec<f64> = steps.iter().map(|k| xi + k * s).collect();
            integrate_adaptive_with_breaks(
                |y| normal_pdf(y, xi, s) * log_ratio(points, &log_probs, lo, hi, i, y, s),
                &breaks,
                cfg,
            )
        })
        .collect()
}

/// `I(X; Y)` in nats for a discrete input, computed as
/// `sum_i q_i D(W(.|x_i) || p)`.
///
/// This equals `h(Y) - h(Z)` (see [`output_entropy`]) but stays accurate
/// when the information is many orders of magnitude below `h(Z)`.
pub fn mutual_information(
    dist: &DiscreteInputDistribution,
    law: &ChannelLaw,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let d = divergences(dist, law, cfg)?;
    let total: f64 = dist.probs().iter().zip(&d).map(|(q, d)| q * d).sum();
    Ok(total.max(0.0))
}

/// Differential entropy of the output mixture, by adaptive quadrature over
/// `[min point - 10 sigma, max point + 10 sigma]`.
pub fn output_entropy(
    dist: &DiscreteInputDistribution,
    law: &ChannelLaw,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    let s = law.sigma;
    let (points, probs) = (dist.points(), dist.probs());
    let log_p = |y: f64| {
        let (lo, hi) = window(points, y, (SPAN + 30.0) * s);
        let terms = (lo..hi)
            .filter(|&j| probs[j] > 0.0)
            .map(|j| probs[j].ln() + normal_log_pdf(y, points[j], s));
        log_sum_exp(terms)
    };
    let mut breaks: Vec<f64> = Vec::with_capacity(points.len() + 2);
    breaks.push(points[0] - SPAN * s);
    for &x in points {
        if x - breaks[breaks.len() - 1] > 0.5 * s {
            breaks.push(x);
        }
    }
    breaks.push(dist.max_point() + SPAN * s);
    integrate_adaptive_with_breaks(
        |y| {
            let lp = log_p(y);
            if lp == f64::NEG_INFINITY {
                0.0
            } else {
                -lp.exp() * lp
            }
        },
        &breaks,
        cfg,
    )
}

pub(crate) fn log_sum_exp(terms: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = terms.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// `h(Y) - h(Z)` using [`output_entropy`]; loses relative accuracy at low SNR.
pub fn mutual_information_via_entropy(
    dist: &DiscreteInputDistribution,
    law: &ChannelLaw,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    Ok(output_entropy(dist, law, cfg)? - gaussian_entropy(law.sigma))
}

/// Information rate of the two-point input with mass `1 - alpha'` at 0 and
/// `alpha'` at `A`, `alpha'` being the effective average-to-peak ratio.
pub fn binary_input_mi(params: &ChannelParams) -> Result<f64> {
    let a = params.require_peak()?;
    let alpha = classify(params)
        .effective_alpha()
        .ok_or_else(|| domain("binary input needs a peak constraint"))?;
    let dist = DiscreteInputDistribution::new(vec![0.0, a], vec![1.0 - alpha, alpha])?;
    mutual_information(&dist, &params.law(), &QuadratureConfig::default())
}

/// On-off keying for the average-only channel: mass `E / x` at `x` and the
/// rest at 0, with `x` chosen to maximize the information rate.
pub fn on_off_keying(params: &ChannelParams) -> Result<BoundValue> {
    if params.peak().is_some() {
        return Err(domain(
            "on-off keying bound applies to the average-only channel",
        ));
    }
    let (e_avg, s) = (params.average(), params.sigma());
    let law = params.law();
    let cfg = QuadratureConfig::default();
    let rate = |x: f64| -> Result<f64> {
        let p = (e_avg / x).min(1.0);
        if p >= 1.0 {
            return Ok(0.0);
        }
        let dist = DiscreteInputDistribution::new(vec![0.0, x], vec![1.0 - p, p])?;
        mutual_information(&dist, &law, &cfg)
    };
    let mut failure: Option<Error> = None;
    let hi = e_avg + 30.0 * s;
    let x = golden_section(
        |x| match rate(x) {
            Ok(v) => -v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        e_avg,
        hi,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(BoundValue::new(BoundSource::OnOffKeying, rate(x)?).with_param("location", x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_adaptive;

    fn law() -> ChannelLaw {
        ChannelLaw::new(1.0).unwrap()
    }

    #[test]
    fn point_mass_carries_no_information() {
        let d = DiscreteInputDistribution::point_mass(3.0).unwrap();
        let v = mutual_information(&d, &law(), &QuadratureConfig::default()).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn well_separated_binary_saturates() {
        let d = DiscreteInputDistribution::new(vec![0.0, 100.0], vec![0.5, 0.5]).unwrap();
        let v = mutual_information(&d, &law(), &QuadratureConfig::default()).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn small_amplitude_binary_matches_second_order() {
        let (a, p) = (0.03, 0.3);
        let d = DiscreteInputDistribution::new(vec![0.0, a], vec![1.0 - p, p]).unwrap();
        let v = mutual_information(&d, &law(), &QuadratureConfig::default()).unwrap();
        let approx = p * (1.0 - p) * a * a / 2.0;
        assert!(((v - approx) / approx).abs() < 0.05, "{v} vs {approx}");
    }

    #[test]
    fn agrees_with_entropy_form_at_moderate_snr() {
        let d = DiscreteInputDistribution::new(vec![0.0, 1.2, 2.5, 6.0], vec![0.4, 0.1, 0.2, 0.3])
            .unwrap();
        let cfg = QuadratureConfig::default();
        let a = mutual_information(&d, &law(), &cfg).unwrap();
        let b = mutual_information_via_entropy(&d, &law(), &cfg).unwrap();
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn entropy_form_matches_brute_force_integral() {
        let d = DiscreteInputDistribution::new(vec![0.0, 2.0], vec![0.5, 0.5]).unwrap();
        let p = |y: f64| 0.5 * normal_pdf(y, 0.0, 1.0) + 0.5 * normal_pdf(y, 2.0, 1.0);
        let brute = integrate_adaptive(
            |y| -p(y) * p(y).ln(),
            -12.0,
            14.0,
            &QuadratureConfig::default(),
        )
        .unwrap();
        let h = output_entropy(&d, &law(), &QuadratureConfig::default()).unwrap();
        assert!((h - brute).abs() < 1e-10);
    }

    #[test]
    fn binary_input_low_snr_coefficients() {
        for (alpha, coeff) in [(0.5, 0.125), (0.1, 0.045)] {
            let a = 1e-3;
            let p = ChannelParams::with_alpha(a, alpha, 1.0).unwrap();
            let v = binary_input_mi(&p).unwrap() / (a * a);
            assert!(((v - coeff) / coeff).abs() < 1e-3, "alpha={alpha}: {v}");
        }
    }

    #[test]
    fn on_off_keying_beats_fixed_locations() {
        let p = ChannelParams::average_only(0.01, 1.0).unwrap();
        let best = on_off_keying(&p).unwrap();
        let x = best.param("location").unwrap();
        for other in [1.0, 2.0, x * 0.8, x * 1.2, 10.0] {
            let q = 0.01 / other;
            let d = DiscreteInputDistribution::new(vec![0.0, other], vec![1.0 - q, q]).unwrap();
            let v = mutual_information(&d, &law(), &QuadratureConfig::default()).unwrap();
            assert!(v <= best.nats + 1e-12);
        }
    }
}
