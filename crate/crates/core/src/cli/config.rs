use std::path::Path;

use serde::Deserialize;

use super::sweep::{SweepMode, SweepSpec};
use super::CliError;
use crate::channel::DbConvention;

/// Sweep settings read from a TOML file. Every key is optional; keys use
/// the long flag names with dashes.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub mode: Option<SweepMode>,
    pub alpha: Option<f64>,
    pub snr_min: Option<f64>,
    pub snr_max: Option<f64>,
    pub step: Option<f64>,
    pub db_convention: Option<DbConvention>,
    pub oracle: Option<bool>,
    pub refine: Option<bool>,
    pub out: Option<String>,
    pub summary_json: Option<String>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("bad config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Values from `over` win wherever they are set.
    pub fn overlay(self, over: FileConfig) -> FileConfig {
        FileConfig {
            mode: over.mode.or(self.mode),
            alpha: over.alpha.or(self.alpha),
            snr_min: over.snr_min.or(self.snr_min),
            snr_max: over.snr_max.or(self.snr_max),
            step: over.step.or(self.step),
            db_convention: over.db_convention.or(self.db_convention),
            oracle: over.oracle.or(self.oracle),
            refine: over.refine.or(self.refine),
            out: over.out.or(self.out),
            summary_json: over.summary_json.or(self.summary_json),
        }
    }

    pub fn to_spec(&self) -> SweepSpec {
        let d = SweepSpec::default();
        SweepSpec {
            mode: self.mode.unwrap_or(d.mode),
            alpha: self.alpha,
            snr_db_min: self.snr_min.unwrap_or(d.snr_db_min),
            snr_db_max: self.snr_max.unwrap_or(d.snr_db_max),
            snr_db_step: self.step.unwrap_or(d.snr_db_step),
            db_convention: self.db_convention.unwrap_or(d.db_convention),
            include_oracle: self.oracle.unwrap_or(false),
            refine_params: self.refine.unwrap_or(false),
        }
    }
}
