use serde::{Deserialize, Serialize};

use crate::channel::ChannelParams;
use crate::error::{ensure_finite, Error, Result};

/// A finitely supported input law on the nonnegative reals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteInputDistribution {
    points: Vec<f64>,
    probs: Vec<f64>,
}

const SUM_TOLERANCE: f64 = 1e-12;
const MEAN_SLACK: f64 = 1e-9;

impl DiscreteInputDistribution {
    /// Points must be nonnegative and strictly increasing; probabilities
    /// nonnegative and summing to one within `1e-12`.
    pub fn new(points: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != probs.len() {
            return Err(Error::InvalidParams(format!(
                "need matching nonempty point and probability lists, got {} and {}",
                points.len(),
                probs.len()
            )));
        }
        for (&x, &p) in points.iter().zip(&probs) {
            ensure_finite("mass point", x)?;
            ensure_finite("probability", p)?;
            if x < 0.0 {
                return Err(Error::InvalidParams(format!("mass point {x} is negative")));
            }
            if p < 0.0 {
                return Err(Error::InvalidParams(format!("probability {p} is negative")));
            }
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParams(
                "mass points must be strictly increasing".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidParams(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { points, probs })
    }

    /// Like [`new`](Self::new) but rescales the probabilities to sum to one
    /// and drops zero-probability points.
    pub fn normalized(points: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        let total: f64 = probs.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "probability mass {total} is not positive"
            )));
        }
        let (points, probs): (Vec<f64>, Vec<f64>) = points
            .into_iter()
            .zip(probs)
            .filter(|&(_, p)| p > 0.0)
            .map(|(x, p)| (x, p / total))
            .unzip();
        let total: f64 = probs.iter().sum();
        let probs = probs.into_iter().map(|p| p / total).collect();
        Self::new(points, probs)
    }

    pub fn point_mass(x: f64) -> Result<Self> {
        Self::new(vec![x], vec![1.0])
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.points
            .iter()
            .zip(&self.probs)
            .map(|(x, p)| x * p)
            .sum()
    }

    pub fn max_point(&self) -> f64 {
        *self.points.last().expect("nonempty")
    }

    /// Checks the peak and average constraints of `params`.
    pub fn check_feasible(&self, params: &ChannelParams) -> Result<()> {
        if let Some(a) = params.peak() {
            if self.max_point() > a * (1.0 + 1e-12) {
                return Err(Error::Infeasible(format!(
                    "mass point {} exceeds peak {a}",
                    self.max_point()
                )));
            }
        }
        let mean = self.mean();
        if mean > params.average() + MEAN_SLACK {
            return Err(Error::Infeasible(format!(
                "mean {mean} exceeds average constraint {}",
                params.average()
            )));
        }
        Ok(())
    }
}
