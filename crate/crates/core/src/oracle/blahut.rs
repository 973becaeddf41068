//! Capacity of the discretized channel by Blahut–Arimoto with a Lagrange
//! multiplier for the average constraint.

use std::cell::RefCell;

use serde::Serialize;

use super::information::{mutual_information, mutual_information_via_entropy, SPAN};
use super::input::DiscreteInputDistribution;
use crate::channel::ChannelParams;
use crate::error::{domain, Error, Result};
use crate::numerics::root::solve_bracketed;
use crate::numerics::{golden_section, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Input grid size; defaults to 400 with a peak constraint and 800
    /// without. Raised automatically to respect `max_spacing`.
    pub grid_points: Option<usize>,
    /// Truncation of the average-only input alphabet, in units of sigma;
    /// defaults to `max(40, 20 E / sigma)`.
    pub support_max: Option<f64>,
    /// Largest input grid spacing, in units of sigma.
    pub max_spacing: f64,
    /// Output grid spacing, in units of sigma.
    pub output_spacing: f64,
    /// Stop once the gap between the upper and lower capacity functionals
    /// falls below this many nats.
    pub ba_tolerance: f64,
    pub max_iterations: usize,
    /// Initial bracket for the multiplier, in units of `1 / sigma`; it is
    /// widened as needed.
    pub multiplier_bracket: (f64, f64),
    /// Over-relaxation of the multiplicative update: the step grows by this
    /// factor per iteration up to `max_step`, and resets to 1 whenever the
    /// information rate decreases. `1.0` gives the classic iteration.
    pub step_growth: f64,
    pub max_step: f64,
    pub quadrature: QuadratureConfig,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            grid_points: None,
            support_max: None,
            max_spacing: 1.0,
            output_spacing: 0.5,
            ba_tolerance: 1e-5,
            max_iterations: 200_000,
            multiplier_bracket: (0.0, 1.0),
            step_growth: 1.1,
            max_step: 8.0,
            quadrature: QuadratureConfig::default(),
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if matches!(self.grid_points, Some(n) if n < 2) {
            return Err(domain("grid_points must be at least 2"));
        }
        if matches!(self.support_max, Some(s) if !(s > 0.0 && s.is_finite())) {
            return Err(domain("support_max must be positive"));
        }
        if !(self.max_spacing > 0.0) || !(self.output_spacing > 0.0 && self.output_spacing <= 1.0) {
            return Err(domain(
                "grid spacings must be positive (output spacing at most sigma)",
            ));
        }
        if !(self.ba_tolerance > 0.0) {
            return Err(domain("ba_tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(domain("max_iterations must be positive"));
        }
        let (lo, hi) = self.multiplier_bracket;
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(domain("multiplier bracket must satisfy 0 <= lo < hi"));
        }
        self.quadrature.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    /// Mutual information of the returned input, by continuous quadrature.
    pub nats: f64,
    /// Lower functional of the discretized channel at the last iterate.
    pub discrete_lower: f64,
    /// Upper functional of the discretized channel; bounds its capacity.
    pub discrete_upper: f64,
    pub iterations: usize,
    /// Lagrange multiplier of the average constraint, in units of `1 / sigma`.
    pub multiplier: f64,
    pub grid_points: usize,
    pub distribution: DiscreteInputDistribution,
}

impl OracleResult {
    pub fn bracket(&self) -> f64 {
        self.discrete_upper - self.discrete_lower
    }
}

/// Banded transition matrix of the discretized channel.
struct Channel {
    x: Vec<f64>,
    /// First output index of each row.
    start: Vec<usize>,
    offsets: Vec<usize>,
    weights: Vec<f64>,
    /// `sum_k W_ik ln W_ik`.
    neg_entropy: Vec<f64>,
    outputs: usize,
}

impl Channel {
    fn new(x: Vec<f64>, sigma: f64, h: f64) -> Self {
        let span = SPAN * sigma;
        let y0 = x[0] - span;
        let outputs = ((x[x.len() - 1] + span - y0) / h).ceil() as usize + 1;
        let mut start = Vec::with_capacity(x.len());
        let mut offsets = Vec::with_capacity(x.len() + 1);
        let mut weights = Vec::new();
        let mut neg_entropy = Vec::with_capacity(x.len());
        offsets.push(0);
        for &xi in &x {
            let k_lo = ((xi - span - y0) / h).ceil().max(0.0) as usize;
            let k_hi = (((xi + span - y0) / h).floor() as usize).min(outputs - 1);
            let row: Vec<f64> = (k_lo..=k_hi)
                .map(|k| {
                    let z = (y0 + k as f64 * h - xi) / sigma;
                    (-0.5 * z * z).exp()
                })
                .collect();
            let total: f64 = row.iter().sum();
            let mut ne = 0.0;
            for w in &row {
                let w = w / total;
                if w > 0.0 {
                    ne += w * w.ln();
                }
                weights.push(w);
            }
            start.push(k_lo);
            offsets.push(weights.len());
            neg_entropy.push(ne);
        }
        Self {
            x,
            start,
            offsets,
            weights,
            neg_entropy,
            outputs,
        }
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.weights[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Divergences `D(W_i || q W)` for every input.
    fn divergences(&self, q: &[f64], p: &mut [f64], d: &mut [f64]) {
        p.fill(0.0);
        for (i, &qi) in q.iter().enumerate() {
            if qi == 0.0 {
                continue;
            }
            let s = self.start[i];
            for (pk, w) in p[s..].iter_mut().zip(self.row(i)) {
                *pk += qi * w;
            }
        }
        for pk in p.iter_mut() {
            *pk = pk.max(f64::MIN_POSITIVE).ln();
        }
        for (i, di) in d.iter_mut().enumerate() {
            let s = self.start[i];
            let cross: f64 = p[s..].iter().zip(self.row(i)).map(|(lp, w)| w * lp).sum();
            *di = self.neg_entropy[i] - cross;
        }
    }
}

/// Iterations between full searches of the dual bound over the multiplier.
const DUAL_SEARCH_EVERY: usize = 16;

/// Smallest probability kept on a grid point.
const PROBABILITY_FLOOR: f64 = 1e-250;

/// Tilted log-weights `base_i - s x_i`, normalized; returns the mean.
fn tilt(base: &[f64], x: &[f64], s: f64, out: &mut [f64]) -> f64 {
    let m = base
        .iter()
        .zip(x)
        .map(|(b, xi)| b - s * xi)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut z = 0.0;
    let mut first = 0.0;
    for ((o, b), xi) in out.iter_mut().zip(base).zip(x) {
        let w = (b - s * xi - m).exp();
        *o = w;
        z += w;
        first += w * xi;
    }
    for o in out.iter_mut() {
        *o /= z;
        // Keep every grid point alive and the products with the channel
        // weights out of the subnormal range.
        *o = o.max(PROBABILITY_FLOOR);
    }
    first / z
}

/// Multiplier `s >= 0` for which the tilted law has mean `target`, or 0 if
/// the untilted law already satisfies the constraint.
///
/// The multiplier moves little between iterations, so the search starts
/// from a narrow bracket around `previous` and widens it geometrically.
fn solve_multiplier(
    base: &[f64],
    x: &[f64],
    target: f64,
    previous: f64,
    initial_hi: f64,
    scratch: &mut [f64],
) -> Result<f64> {
    let buf = RefCell::new(scratch);
    let excess = |s: f64| tilt(base, x, s, &mut buf.borrow_mut()) - target;
    let infeasible = || Error::Infeasible(format!("cannot reach mean {target} on this grid"));

    let mut width = 1e-4;
    let (mut lo, mut f_lo, mut hi, mut f_hi);
    let near = previous * (1.0 - width);
    let f_near = if previous > 0.0 {
        excess(near)
    } else {
        f64::NAN
    };
    if f_near > 0.0 {
        (lo, f_lo) = (near, f_near);
        hi = previous * (1.0 + width);
        f_hi = excess(hi);
    } else {
        f_lo = excess(0.0);
        if f_lo <= target * 1e-12 {
            return Ok(0.0);
        }
        lo = 0.0;
        if previous > 0.0 {
            // The root lies below the previous multiplier.
            (hi, f_hi) = (near, f_near);
        } else {
            hi = initial_hi;
            f_hi = excess(hi);
        }
    }
    let mut guard = 0;
    while f_hi > 0.0 {
        (lo, f_lo) = (hi, f_hi);
        width = (width * 4.0).min(1.0);
        hi *= 1.0 + width;
        f_hi = excess(hi);
        guard += 1;
        if guard > 2000 || !hi.is_finite() {
            return Err(infeasible());
        }
    }
    solve_bracketed(excess, (lo, f_lo), (hi, f_hi), 1e-14 * hi.max(1e-300))
}

/// Numerical capacity estimate: Blahut–Arimoto on a uniform input grid.
pub fn capacity_oracle(params: &ChannelParams, cfg: &OracleConfig) -> Result<OracleResult> {
    cfg.validate()?;
    let s = params.sigma();
    let e_avg = params.average();
    let (length, default_points) = match params.peak() {
        Some(a) => (a, 400),
        None => (
            cfg.support_max.unwrap_or((20.0 * e_avg / s).max(40.0)) * s,
            800,
        ),
    };
    if params.peak().is_none() && length <= e_avg {
        return Err(Error::Infeasible(
            "support truncation lies below the average".into(),
        ));
    }
    let points = cfg
        .grid_points
        .unwrap_or(default_points)
        .max((length / (cfg.max_spacing * s)).ceil() as usize + 1);
    let x: Vec<f64> = (0..points)
        .map(|i| length * i as f64 / (points - 1) as f64)
        .collect();
    let channel = Channel::new(x, s, cfg.output_spacing * s);
    let x = &channel.x;
    let n = x.len();

    let mut q = vec![0.0; n];
    let mut base = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let initial_hi = cfg.multiplier_bracket.1.max(1e-3) / s;
    let mut mult = solve_multiplier(&base, x, e_avg, 0.0, initial_hi, &mut scratch)?;
    tilt(&base, x, mult, &mut q);

    let mut p = vec![0.0; channel.outputs];
    let mut d = vec![0.0; n];
    let mut previous_q = q.clone();
    let mut previous_lower = f64::NEG_INFINITY;
    let mut previous_mult = mult;
    let mut step = 1.0;
    // Step that produced the current iterate.
    let mut applied = 1.0;
    let mut best_upper = f64::INFINITY;
    let mut iterations = 0;
    let (lower, upper) = loop {
        channel.divergences(&q, &mut p, &mut d);
        let lower: f64 = q.iter().zip(&d).map(|(qi, di)| qi * di).sum();
        if lower < previous_lower && applied > 1.0 {
            // Over-relaxed step lost ground: undo it and fall back to a plain step.
            q.copy_from_slice(&previous_q);
            mult = previous_mult;
            step = 1.0;
            applied = 1.0;
            previous_lower = f64::NEG_INFINITY;
            continue;
        }
        let upper_at = |m: f64| {
            d.iter()
                .zip(x)
                .map(|(di, xi)| di - m * xi)
                .fold(f64::NEG_INFINITY, f64::max)
                + m * e_avg
        };
        let bracket_upper = upper_at(mult);
        for i in 0..n {
            base[i] = if q[i] > 0.0 {
                q[i].ln() + step * d[i]
            } else {
                f64::NEG_INFINITY
            };
        }
        let next = solve_multiplier(&base, x, e_avg, mult * step, initial_hi, &mut scratch)? / step;
        let mut upper = bracket_upper.min(upper_at(next));
        if upper - lower > cfg.ba_tolerance && mult > 0.0 && iterations % DUAL_SEARCH_EVERY == 0 {
            // The dual bound holds for every multiplier; a larger one tames
            // grid points far beyond the mean.
            let best = golden_section(upper_at, 0.0, 4.0 * mult.max(next));
            upper = upper.min(upper_at(best));
        }
        // Every iterate yields a valid bound; keep the tightest.
        best_upper = best_upper.min(upper);
        let upper = best_upper;

        if upper - lower <= cfg.ba_tolerance {
            break (lower, upper);
        }
        if iterations >= cfg.max_iterations {
            return Err(Error::IterationLimit {
                iterations,
                bracket: upper - lower,
            });
        }
        previous_q.copy_from_slice(&q);
        previous_lower = lower;
        previous_mult = mult;
        mult = next;
        tilt(&base, x, mult * step, &mut q);
        applied = step;
        step = (step * cfg.step_growth).min(cfg.max_step);
        iterations += 1;
    };

    let cutoff = 1e-14;
    let (pts, probs): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(&q)
        .filter(|(_, &qi)| qi > cutoff)
        .map(|(&xi, &qi)| (xi, qi))
        .unzip();
    let distribution = DiscreteInputDistribution::normalized(pts, probs)?;
    // Above one nat the entropy form is accurate to far better than the
    // tolerance and costs a single integral instead of one per mass point.
    let nats = if lower > 1.0 {
        mutual_information_via_entropy(&distribution, &params.law(), &cfg.quadrature)?
    } else {
        mutual_information(&distribution, &params.law(), &cfg.quadrature)?
    };
    Ok(OracleResult {
        nats,
        discrete_lower: lower,
        discrete_upper: upper,
        iterations,
        multiplier: mult * s,
        grid_points: n,
        distribution,
    })
}
