use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{JelError, Result};
use crate::inference::Method;
use crate::simharness::run::SimulationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = JelError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(JelError::Config(format!(
                "format must be `csv` or `markdown`, got {other:?}"
            ))),
        }
    }
}

pub const REPORT_HEADER: [&str; 9] = ["rho", "n", "method", "cp", "l", "u", "al", "lb", "failed"];

/// One line of a rendered report, at the printed precision.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub rho: f64,
    pub n: usize,
    pub method: Method,
    pub cp: f64,
    pub l: f64,
    pub u: f64,
    pub al: f64,
    pub lb: f64,
    pub failed: usize,
}

fn fmt1(v: f64) -> String {
    format!("{v:.1}")
}

fn fmt3(v: f64) -> String {
    format!("{v:.3}")
}

fn row_fields(r: &ReportRow) -> [String; 9] {
    [
        r.rho.to_string(),
        r.n.to_string(),
        r.method.tag().to_string(),
        fmt1(r.cp),
        fmt1(r.l),
        fmt1(r.u),
        fmt3(r.al),
        fmt3(r.lb),
        r.failed.to_string(),
    ]
}

fn parse_f64(raw: &str) -> f64 {
    raw.parse().expect("formatted float parses")
}

impl SimulationReport {
    /// Cells rounded to the printed precision: rates to one decimal,
    /// lengths and bounds to three.
    pub fn rows(&self) -> Vec<ReportRow> {
        self.cells
            .iter()
            .map(|c| ReportRow {
                rho: c.rho,
                n: c.n,
                method: c.method,
                cp: parse_f64(&fmt1(c.cp)),
                l: parse_f64(&fmt1(c.l)),
                u: parse_f64(&fmt1(c.u)),
                al: parse_f64(&fmt3(c.al)),
                lb: parse_f64(&fmt3(c.lb)),
                failed: c.failed,
            })
            .collect()
    }
}

/// Renders the report as CSV or as a markdown table laid out like the
/// usual coverage tables: one block per `rho`, one sub-block per `n`.
pub fn emit_report(report: &SimulationReport, format: ReportFormat) -> Result<String> {
    let rows = report.rows();
    match format {
        ReportFormat::Csv => {
            let mut out = csv::Writer::from_writer(Vec::new());
            out.write_record(REPORT_HEADER)?;
            for r in &rows {
                out.write_record(row_fields(r))?;
            }
            let bytes = out.into_inner().map_err(|e| JelError::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| JelError::Io(e.to_string()))
        }
        ReportFormat::Markdown => {
            let mut s = String::new();
            let _ = writeln!(s, "| rho | n | CI | CP | L | U | AL | LB | failed |");
            let _ = writeln!(s, "|---|---|---|---:|---:|---:|---:|---:|---:|");
            let mut last: Option<(f64, usize)> = None;
            for r in &rows {
                let rho = match last {
                    Some((rho, _)) if rho == r.rho => String::new(),
                    _ => r.rho.to_string(),
                };
                let n = match last {
                    Some((rho, n)) if rho == r.rho && n == r.n => String::new(),
                    _ => r.n.to_string(),
                };
                last = Some((r.rho, r.n));
                let f = row_fields(r);
                let _ = writeln!(
                    s,
                    "| {rho} | {n} | {} | {} | {} | {} | {} | {} | {} |",
                    f[2], f[3], f[4], f[5], f[6], f[7], f[8]
                );
            }
            Ok(s)
        }
    }
}

/// Parses the CSV produced by [`emit_report`].
pub fn parse_report_csv(text: &str) -> Result<Vec<ReportRow>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if header != REPORT_HEADER {
        return Err(JelError::Schema(format!(
            "expected report header {:?}, found {:?}",
            REPORT_HEADER.join(","),
            header.join(",")
        )));
    }
    let mut rows = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("").trim();
        let bad = |name: &str| JelError::Schema(format!("report row {}: bad {name}", k + 1));
        let num = |i: usize, name: &str| field(i).parse::<f64>().map_err(|_| bad(name));
        rows.push(ReportRow {
            rho: num(0, "rho")?,
            n: field(1).parse().map_err(|_| bad("n"))?,
            method: field(2).parse().map_err(|_| bad("method"))?,
            cp: num(3, "cp")?,
            l: num(4, "l")?,
            u: num(5, "u")?,
            al: num(6, "al")?,
            lb: num(7, "lb")?,
            failed: field(8).parse().map_err(|_| bad("failed"))?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simharness::config::SimulationConfig;
    use crate::simharness::run::CellResult;

    fn report() -> SimulationReport {
        let cell = |rho: f64, n: usize, method: Method, cp: f64| CellResult {
            rho,
            n,
            method,
            theta_true: 1.0,
            replicates: 1000,
            covered: 0,
            below: 0,
            above: 0,
            failed: 2,
            cp,
            l: 100.0 - cp - 1.23456,
            u: 1.23456,
            al: 0.123456789,
            lb: 1.0 / 3.0,
        };
        SimulationReport {
            config: SimulationConfig::default(),
            cells: vec![
                cell(0.3, 100, Method::Na, 90.04),
                cell(0.3, 100, Method::Jel, 93.16),
                cell(0.3, 150, Method::Jel, 94.95),
                cell(0.5, 100, Method::JelW, 95.0),
            ],
        }
    }

    #[test]
    fn csv_round_trip() {
        let r = report();
        let text = emit_report(&r, ReportFormat::Csv).unwrap();
        assert!(text.starts_with("rho,n,method,cp,l,u,al,lb,failed\n0.3,100,NA,90.0,"));
        assert_eq!(parse_report_csv(&text).unwrap(), r.rows());
    }

    #[test]
    fn markdown_layout() {
        let text = emit_report(&report(), ReportFormat::Markdown).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(
            lines[2],
            "| 0.3 | 100 | NA | 90.0 | 8.7 | 1.2 | 0.123 | 0.333 | 2 |"
        );
        assert!(lines[3].starts_with("|  |  | JEL | 93.2 |"));
        assert!(lines[4].starts_with("|  | 150 | JEL |"));
        assert!(lines[5].starts_with("| 0.5 | 100 | JEL_w |"));
    }

    #[test]
    fn rejects_foreign_csv() {
        assert!(matches!(
            parse_report_csv("a,b\n1,2\n"),
            Err(JelError::Schema(_))
        ));
    }
}
