//! CSV form of a sweep table. Numbers carry 12 significant digits so a
//! written table parses back to exactly the values it prints.

use std::io::{Read, Write};

use super::sweep::{SweepRow, SweepTable};
use super::CliError;

pub const CSV_HEADER: [&str; 8] = [
    "snr_db",
    "lower",
    "upper_low",
    "upper_high",
    "best_lower",
    "best_upper",
    "oracle",
    "gap",
];

fn fmt_num(v: f64) -> String {
    format!("{v:.11e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

/// Rounds to the precision used in the CSV file.
pub fn round_to_csv(v: f64) -> f64 {
    fmt_num(v).parse().expect("formatted float parses")
}

impl SweepTable {
    /// The table as it reads back after a CSV round trip.
    pub fn rounded(&self) -> SweepTable {
        let r = round_to_csv;
        SweepTable {
            rows: self
                .rows
                .iter()
                .map(|row| SweepRow {
                    snr_db: r(row.snr_db),
                    lower: r(row.lower),
                    upper_low: row.upper_low.map(r),
                    upper_high: row.upper_high.map(r),
                    best_lower: r(row.best_lower),
                    best_upper: r(row.best_upper),
                    oracle: row.oracle.map(r),
                    gap: r(row.gap),
                })
                .collect(),
        }
    }
}

pub fn write_csv<W: Write>(table: &SweepTable, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in &table.rows {
        w.write_record([
            fmt_num(row.snr_db),
            fmt_num(row.lower),
            fmt_opt(row.upper_low),
            fmt_opt(row.upper_high),
            fmt_num(row.best_lower),
            fmt_num(row.best_upper),
            fmt_opt(row.oracle),
            fmt_num(row.gap),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(table: &SweepTable) -> String {
    let mut buf = Vec::new();
    write_csv(table, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

pub fn read_csv<R: Read>(input: R) -> Result<SweepTable, CliError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(CliError::Usage(format!("unexpected CSV header {header:?}")));
    }
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        let field = |i: usize| -> Result<Option<f64>, CliError> {
            let s = record.get(i).unwrap_or("");
            if s.is_empty() {
                return Ok(None);
            }
            s.parse().map(Some).map_err(|_| {
                CliError::Usage(format!("bad number '{s}' in column {}", CSV_HEADER[i]))
            })
        };
        let required = |i: usize| -> Result<f64, CliError> {
            field(i)?.ok_or_else(|| {
                CliError::Usage(format!("missing value in column {}", CSV_HEADER[i]))
            })
        };
        rows.push(SweepRow {
            snr_db: required(0)?,
            lower: required(1)?,
            upper_low: field(2)?,
            upper_high: field(3)?,
            best_lower: required(4)?,
            best_upper: required(5)?,
            oracle: field(6)?,
            gap: required(7)?,
        });
    }
    Ok(SweepTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SweepTable {
        SweepTable {
            rows: vec![
                SweepRow {
                    snr_db: -1.25,
                    lower: 0.123_456_789_012_345,
                    upper_low: Some(1.0 / 3.0),
                    upper_high: None,
                    best_lower: 0.123_456_789_012_345,
                    best_upper: 1.0 / 3.0,
                    oracle: None,
                    gap: 1.0 / 3.0 - 0.123_456_789_012_345,
                },
                SweepRow {
                    snr_db: 40.0,
                    lower: 7.7,
                    upper_low: Some(9.0),
                    upper_high: Some(7.71),
                    best_lower: 7.7,
                    best_upper: 7.71,
                    oracle: Some(7.705),
                    gap: 0.01,
                },
            ],
        }
    }

    #[test]
    fn header_and_empty_fields() {
        let s = csv_string(&sample());
        let mut lines = s.lines();
        assert_eq!(
            lines.next().unwrap(),
            "snr_db,lower,upper_low,upper_high,best_lower,best_upper,oracle,gap"
        );
        let first = lines.next().unwrap();
        assert_eq!(first.split(',').nth(3), Some(""));
        assert_eq!(first.split(',').nth(6), Some(""));
    }

    #[test]
    fn round_trip_is_exact_at_printed_precision() {
        let t = sample();
        let text = csv_string(&t);
        let parsed = read_csv(text.as_bytes()).unwrap();
        assert_eq!(parsed, t.rounded());
        assert_eq!(csv_string(&parsed), text);
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(round_to_csv(1.0 / 3.0), 0.333333333333);
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
