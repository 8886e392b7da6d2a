//! Experiment reports and their CSV / JSON encodings.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

pub const CSV_HEADER: &str = "experiment,instance,metric,value,bound,pass,seed,tol,runtime_ms";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub experiment: String,
    pub instance: String,
    pub metric: String,
    pub value: f64,
    pub bound: Option<f64>,
    pub pass: bool,
    pub seed: u64,
    pub tol: f64,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub rows: Vec<Row>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

pub fn emit_report(r: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).context("report is not JSON-encodable")?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(CSV_HEADER.split(','))?;
            for row in &r.rows {
                w.serialize(row)?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
    }
}

pub fn parse_json_report(text: &str) -> Result<Report> {
    serde_json::from_str(text).context("malformed JSON report")
}

pub fn parse_csv_report(text: &str) -> Result<Report> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    anyhow::ensure!(header.join(",") == CSV_HEADER, "unexpected CSV header");
    let rows = rd.deserialize().collect::<std::result::Result<Vec<Row>, _>>()?;
    Ok(Report { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> Row {
        Row {
            experiment: "john-cube".into(),
            instance: "d=2".into(),
            metric: "certified factor".into(),
            value: std::f64::consts::SQRT_2,
            bound: Some(std::f64::consts::SQRT_2),
            pass: true,
            seed: 7,
            tol: 1e-9,
            runtime_ms: 3,
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let s = emit_report(&Report::default(), Format::Csv).unwrap();
        assert_eq!(s, format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn one_row_two_lines() {
        let r = Report { rows: vec![row()] };
        let s = emit_report(&r, Format::Csv).unwrap();
        assert_eq!(s.lines().count(), 2);
        assert_eq!(parse_csv_report(&s).unwrap(), r);
    }

    #[test]
    fn json_round_trip() {
        let mut r = Report { rows: vec![row(), row()] };
        r.rows[1].bound = None;
        r.rows[1].value = 1.0 / 3.0;
        let s = emit_report(&r, Format::Json).unwrap();
        assert_eq!(parse_json_report(&s).unwrap(), r);
    }
}
