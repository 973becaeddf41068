use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{evaluate_bounds, BoundMode, BoundSource};
use crate::channel::{classify, CaseLabel, ChannelParams, DbConvention};
use crate::error::{Error, Result};
use crate::oracle::{capacity_oracle, OracleConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    /// Peak and average constraint; the sweep variable is `A / sigma`.
    PeakAvg,
    /// Average constraint only; the sweep variable is `E / sigma`.
    AvgOnly,
}

impl SweepMode {
    pub fn name(self) -> &'static str {
        match self {
            SweepMode::PeakAvg => "peak-avg",
            SweepMode::AvgOnly => "avg-only",
        }
    }
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "peak-avg" => Ok(SweepMode::PeakAvg),
            "avg-only" => Ok(SweepMode::AvgOnly),
            other => Err(Error::InvalidParams(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub mode: SweepMode,
    /// Average-to-peak ratio, required for [`SweepMode::PeakAvg`].
    pub alpha: Option<f64>,
    pub snr_db_min: f64,
    pub snr_db_max: f64,
    pub snr_db_step: f64,
    pub db_convention: DbConvention,
    pub include_oracle: bool,
    pub refine_params: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            mode: SweepMode::PeakAvg,
            alpha: None,
            snr_db_min: -20.0,
            snr_db_max: 40.0,
            snr_db_step: 0.25,
            db_convention: DbConvention::default(),
            include_oracle: false,
            refine_params: false,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.snr_db_min, self.snr_db_max, self.snr_db_step];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("SNR range must be finite".into()));
        }
        if !(self.snr_db_min < self.snr_db_max) {
            return Err(Error::InvalidParams(format!(
                "snr-min ({}) must be below snr-max ({})",
                self.snr_db_min, self.snr_db_max
            )));
        }
        if !(self.snr_db_step > 0.0) {
            return Err(Error::InvalidParams(format!(
                "step must be positive, got {}",
                self.snr_db_step
            )));
        }
        if self.grid_len() > 1_000_000 {
            return Err(Error::InvalidParams(
                "sweep has more than a million points".into(),
            ));
        }
        match (self.mode, self.alpha) {
            (SweepMode::PeakAvg, None) => {
                Err(Error::InvalidParams("mode peak-avg needs --alpha".into()))
            }
            (SweepMode::PeakAvg, Some(a)) if !(a > 0.0 && a <= 1.0) => Err(Error::InvalidParams(
                format!("alpha must lie in (0, 1], got {a}"),
            )),
            (SweepMode::AvgOnly, Some(_)) => Err(Error::InvalidParams(
                "alpha is meaningless in mode avg-only".into(),
            )),
            _ => Ok(()),
        }
    }

    fn grid_len(&self) -> usize {
        ((self.snr_db_max - self.snr_db_min) / self.snr_db_step + 1e-9).floor() as usize + 1
    }

    /// Sweep abscissae in dB, `min + i * step` up to `max`.
    pub fn grid(&self) -> Vec<f64> {
        (0..self.grid_len())
            .map(|i| self.snr_db_min + i as f64 * self.snr_db_step)
            .collect()
    }

    /// Channel at a given dB value, with `sigma = 1`.
    pub fn params_at(&self, snr_db: f64) -> Result<ChannelParams> {
        let ratio = self.db_convention.ratio_from_db(snr_db);
        match self.mode {
            SweepMode::PeakAvg => {
                let alpha = self
                    .alpha
                    .ok_or_else(|| Error::InvalidParams("missing alpha".into()))?;
                ChannelParams::with_alpha(ratio, alpha, 1.0)
            }
            SweepMode::AvgOnly => ChannelParams::average_only(ratio, 1.0),
        }
    }

    pub fn case(&self) -> Result<CaseLabel> {
        Ok(classify(&self.params_at(0.0)?))
    }

    pub fn bound_mode(&self) -> BoundMode {
        if self.refine_params {
            BoundMode::Refined
        } else {
            BoundMode::Heuristic
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub snr_db: f64,
    pub lower: f64,
    pub upper_low: Option<f64>,
    pub upper_high: Option<f64>,
    pub best_lower: f64,
    pub best_upper: f64,
    pub oracle: Option<f64>,
    /// `best_upper - best_lower`.
    pub gap: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

/// Which formulas and parameters produced a row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowDetail {
    pub snr_db: f64,
    pub lower_source: BoundSource,
    pub upper_source: BoundSource,
    pub lower_params: BTreeMap<&'static str, f64>,
    pub upper_params: BTreeMap<&'static str, f64>,
    /// Blahut–Arimoto iterations, when the oracle ran.
    pub oracle_iterations: Option<usize>,
}

/// Evaluates the bounds (and optionally the oracle) at every grid point.
/// Rows are computed in parallel and returned in grid order.
pub fn run_sweep_detailed(
    spec: &SweepSpec,
    oracle_cfg: &OracleConfig,
) -> Result<(SweepTable, Vec<RowDetail>)> {
    spec.validate()?;
    let mode = spec.bound_mode();
    let results: Vec<Result<(SweepRow, RowDetail)>> = spec
        .grid()
        .into_par_iter()
        .map(|snr_db| {
            let params = spec.params_at(snr_db)?;
            let set = evaluate_bounds(&params, mode)?;
            let oracle = if spec.include_oracle {
                Some(capacity_oracle(&params, oracle_cfg)?)
            } else {
                None
            };
            let row = SweepRow {
                snr_db,
                lower: set.lower.nats,
                upper_low: set.upper_low.as_ref().map(|b| b.nats),
                upper_high: set.upper_high.as_ref().map(|b| b.nats),
                best_lower: set.best_lower.nats,
                best_upper: set.best_upper.nats,
                oracle: oracle.as_ref().map(|o| o.nats),
                gap: set.best_upper.nats - set.best_lower.nats,
            };
            let detail = RowDetail {
                snr_db,
                lower_source: set.best_lower.source,
                upper_source: set.best_upper.source,
                lower_params: set.best_lower.free_params.clone(),
                upper_params: set.best_upper.free_params.clone(),
                oracle_iterations: oracle.map(|o| o.iterations),
            };
            Ok((row, detail))
        })
        .collect();
    let mut table = SweepTable::default();
    let mut details = Vec::with_capacity(results.len());
    for r in results {
        let (row, detail) = r?;
        table.rows.push(row);
        details.push(detail);
    }
    Ok((table, details))
}

pub fn run_sweep(spec: &SweepSpec, oracle_cfg: &OracleConfig) -> Result<SweepTable> {
    Ok(run_sweep_detailed(spec, oracle_cfg)?.0)
}
