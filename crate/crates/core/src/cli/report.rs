use serde::Serialize;

use super::sweep::{RowDetail, SweepMode, SweepSpec, SweepTable};
use super::CliError;
use crate::bounds::{asymptote, LowSnrBehavior};
use crate::channel::CaseLabel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxGap {
    pub gap_nats: f64,
    pub at_db: f64,
}

/// Largest `gap` in the table. When the maximum sits at an interior row,
/// a parabola through it and its two neighbours locates the peak between
/// grid points.
pub fn max_gap_report(table: &SweepTable) -> Result<MaxGap, CliError> {
    let rows = &table.rows;
    if rows.is_empty() {
        return Err(CliError::Usage(
            "cannot report the maximum gap of an empty table".into(),
        ));
    }
    let (i, best) = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.gap.total_cmp(&b.1.gap))
        .expect("nonempty");
    let fallback = MaxGap {
        gap_nats: best.gap,
        at_db: best.snr_db,
    };
    if i == 0 || i + 1 == rows.len() {
        return Ok(fallback);
    }
    let (x0, y0) = (rows[i - 1].snr_db, rows[i - 1].gap);
    let (x1, y1) = (rows[i].snr_db, rows[i].gap);
    let (x2, y2) = (rows[i + 1].snr_db, rows[i + 1].gap);
    // Vertex of the interpolating parabola in divided-difference form.
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curv = (d12 - d01) / (x2 - x0);
    if !(curv < 0.0) {
        return Ok(fallback);
    }
    let at = 0.5 * (x0 + x1) - 0.5 * d01 / curv;
    let at = at.clamp(x0, x2);
    let gap = y0 + d01 * (at - x0) + curv * (at - x0) * (at - x1);
    Ok(MaxGap {
        gap_nats: gap.max(y1),
        at_db: at,
    })
}

/// Analytic asymptotes next to the values read off the sweep's end rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoteReport {
    pub case: String,
    /// Constant `c` in `C ~ ln(A / sigma) + c` (with `E` for average-only).
    pub high_snr_offset: f64,
    /// `best_lower - ln(ratio)` at the highest SNR of the sweep.
    pub fitted_high_snr_offset: Option<f64>,
    pub fitted_at_db: Option<f64>,
    pub low_snr: LowSnrBehavior,
    /// Lower and upper bound divided by the low-SNR scaling at the lowest
    /// SNR of the sweep.
    pub fitted_low_snr_lower: Option<f64>,
    pub fitted_low_snr_upper: Option<f64>,
    pub fitted_low_at_db: Option<f64>,
}

pub fn asymptote_report(spec: &SweepSpec, table: &SweepTable) -> Result<AsymptoteReport, CliError> {
    let case = spec.case()?;
    let analytic = asymptote(case)?;
    let ratio = |db: f64| spec.db_convention.ratio_from_db(db);
    let high = table
        .rows
        .iter()
        .max_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
    let low = table
        .rows
        .iter()
        .min_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
    let scale = |r: f64| match case {
        CaseLabel::AverageOnly => {
            if r < 1.0 {
                Some(r * (1.0 / r).ln().sqrt())
            } else {
                None
            }
        }
        _ => Some(r * r),
    };
    let low_scale = low.and_then(|row| scale(ratio(row.snr_db)));
    Ok(AsymptoteReport {
        case: case.short_name().to_string(),
        high_snr_offset: analytic.high_snr_offset,
        fitted_high_snr_offset: high.map(|row| row.best_lower - ratio(row.snr_db).ln()),
        fitted_at_db: high.map(|row| row.snr_db),
        low_snr: analytic.low_snr,
        fitted_low_snr_lower: low.zip(low_scale).map(|(row, s)| row.best_lower / s),
        fitted_low_snr_upper: low.zip(low_scale).map(|(row, s)| row.best_upper / s),
        fitted_low_at_db: low.filter(|_| low_scale.is_some()).map(|row| row.snr_db),
    })
}

/// Machine-readable account of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub mode: SweepMode,
    pub alpha: Option<f64>,
    pub db_convention: &'static str,
    pub refine_params: bool,
    pub include_oracle: bool,
    pub rows: usize,
    pub max_gap: MaxGap,
    pub asymptote: AsymptoteReport,
    pub row_params: Vec<RowDetail>,
}

pub fn summarize(
    spec: &SweepSpec,
    table: &SweepTable,
    details: Vec<RowDetail>,
) -> Result<Summary, CliError> {
    Ok(Summary {
        mode: spec.mode,
        alpha: spec.alpha,
        db_convention: spec.db_convention.name(),
        refine_params: spec.refine_params,
        include_oracle: spec.include_oracle,
        rows: table.rows.len(),
        max_gap: max_gap_report(table)?,
        asymptote: asymptote_report(spec, table)?,
        row_params: details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::sweep::SweepRow;

    fn table(points: &[(f64, f64)]) -> SweepTable {
        SweepTable {
            rows: points
                .iter()
                .map(|&(snr_db, gap)| SweepRow {
                    snr_db,
                    lower: 0.0,
                    upper_low: None,
                    upper_high: None,
                    best_lower: 0.0,
                    best_upper: gap,
                    oracle: None,
                    gap,
                })
                .collect(),
        }
    }

    #[test]
    fn empty_table_is_an_error() {
        assert!(max_gap_report(&SweepTable::default()).is_err());
    }

    #[test]
    fn constant_gap_is_exact() {
        let t = table(&[(0.0, 0.3), (1.0, 0.3), (2.0, 0.3), (3.0, 0.3)]);
        let g = max_gap_report(&t).unwrap();
        assert_eq!(g.gap_nats, 0.3);
        assert!(t.rows.iter().any(|r| r.snr_db == g.at_db));
    }

    #[test]
    fn parabola_vertex_recovered() {
        let f = |x: f64| 0.7 - 0.02 * (x - 11.83).powi(2);
        let pts: Vec<_> = (0..30)
            .map(|i| (i as f64 * 0.5, f(i as f64 * 0.5)))
            .collect();
        let g = max_gap_report(&table(&pts)).unwrap();
        assert!((g.at_db - 11.83).abs() < 1e-9);
        assert!((g.gap_nats - 0.7).abs() < 1e-12);
    }

    #[test]
    fn edge_maximum_is_not_extrapolated() {
        let g = max_gap_report(&table(&[(0.0, 1.0), (1.0, 0.5), (2.0, 0.2)])).unwrap();
        assert_eq!(
            g,
            MaxGap {
                gap_nats: 1.0,
                at_db: 0.0
            }
        );
    }

    fn end_rows(mode: SweepMode, alpha: Option<f64>) -> (SweepSpec, SweepTable) {
        let spec = SweepSpec {
            mode,
            alpha,
            snr_db_min: -30.0,
            snr_db_max: 60.0,
            snr_db_step: 90.0,
            ..Default::default()
        };
        let t = crate::cli::run_sweep(&spec, &crate::oracle::OracleConfig::default()).unwrap();
        (spec, t)
    }

    #[test]
    fn fitted_offsets_match_analytic_ones() {
        use std::f64::consts::{E, PI};
        for (mode, alpha) in [
            (SweepMode::PeakAvg, Some(0.5)),
            (SweepMode::PeakAvg, Some(0.3)),
            (SweepMode::AvgOnly, None),
        ] {
            let (spec, t) = end_rows(mode, alpha);
            let r = asymptote_report(&spec, &t).unwrap();
            assert!(
                (r.fitted_high_snr_offset.unwrap() - r.high_snr_offset).abs() < 0.01,
                "{r:?}"
            );
            assert_eq!(r.fitted_at_db, Some(60.0));
            match mode {
                SweepMode::AvgOnly => {
                    assert!((r.high_snr_offset - 0.5 * (E / (2.0 * PI)).ln()).abs() < 1e-12)
                }
                SweepMode::PeakAvg if alpha == Some(0.5) => {
                    assert!((r.high_snr_offset + 0.5 * (2.0 * PI * E).ln()).abs() < 1e-12)
                }
                _ => {}
            }
        }
    }

    #[test]
    fn low_snr_fit_brackets_the_coefficient() {
        let (spec, t) = end_rows(SweepMode::PeakAvg, Some(0.5));
        let r = asymptote_report(&spec, &t).unwrap();
        let LowSnrBehavior::Coefficient(c) = r.low_snr else {
            panic!("{r:?}")
        };
        assert!(r.fitted_low_snr_lower.unwrap() <= c * 1.01);
        assert!(r.fitted_low_snr_upper.unwrap() >= c * 0.99);
    }
}
