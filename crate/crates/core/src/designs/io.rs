//! CSV exchange formats for population frames and drawn samples.
//!
//! Population files have the header `unit,y,x,pi`, sample files
//! `unit,y,x,pi,d,w` (the `w` column may be omitted). Units are numbered
//! from 1 in files and from 0 in memory. Floats are written in shortest
//! round-trip form.

use std::io::{Read, Write};

use crate::designs::{FinitePopulation, SurveySample};
use crate::error::{JelError, Result};

pub const POPULATION_HEADER: [&str; 4] = ["unit", "y", "x", "pi"];
pub const SAMPLE_HEADER: [&str; 6] = ["unit", "y", "x", "pi", "d", "w"];

pub fn write_population_csv<W: Write>(writer: W, pop: &FinitePopulation, pi: &[f64]) -> Result<()> {
    if pi.len() != pop.size() {
        return Err(JelError::InvalidArgument(format!(
            "{} inclusion probabilities for {} units",
            pi.len(),
            pop.size()
        )));
    }
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(POPULATION_HEADER)?;
    for (i, p) in pi.iter().enumerate() {
        out.write_record([
            (i + 1).to_string(),
            pop.y[i].to_string(),
            pop.x[i].to_string(),
            p.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn check_header(found: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    let got: Vec<&str> = found.iter().map(str::trim).collect();
    if got != expected {
        return Err(JelError::Schema(format!(
            "expected header {:?}, found {:?}",
            expected.join(","),
            got.join(",")
        )));
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(
    rec: &csv::StringRecord,
    col: usize,
    name: &str,
    row: usize,
) -> Result<T> {
    let raw = rec.get(col).unwrap_or("").trim();
    raw.parse()
        .map_err(|_| JelError::Schema(format!("row {row}: cannot parse {name} value {raw:?}")))
}

fn parse_unit(rec: &csv::StringRecord, row: usize) -> Result<usize> {
    let unit: usize = parse_field(rec, 0, "unit", row)?;
    if unit == 0 {
        return Err(JelError::Schema(format!(
            "row {row}: units are numbered from 1"
        )));
    }
    Ok(unit - 1)
}

/// Reads a population frame; returns it with the file's `pi` column.
pub fn read_population_csv<R: Read>(reader: R) -> Result<(FinitePopulation, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    check_header(rdr.headers()?, &POPULATION_HEADER)?;
    let (mut units, mut y, mut x, mut pi) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = row + 1;
        units.push(parse_unit(&rec, row)?);
        y.push(parse_field(&rec, 1, "y", row)?);
        x.push(parse_field(&rec, 2, "x", row)?);
        pi.push(parse_field(&rec, 3, "pi", row)?);
    }
    if units.iter().enumerate().any(|(k, &u)| k != u) {
        return Err(JelError::Schema(
            "population units must be numbered 1..N in order".into(),
        ));
    }
    let pop = FinitePopulation::new(y, x)?;
    Ok((pop, pi))
}

pub fn write_sample_csv<W: Write>(writer: W, sample: &SurveySample) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    let cols = if sample.w.is_some() { 6 } else { 5 };
    out.write_record(&SAMPLE_HEADER[..cols])?;
    for k in 0..sample.n() {
        let mut rec = vec![
            (sample.indices[k] + 1).to_string(),
            sample.y[k].to_string(),
            sample.x[k].to_string(),
            sample.pi[k].to_string(),
            sample.d[k].to_string(),
        ];
        if let Some(w) = &sample.w {
            rec.push(w[k].to_string());
        }
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_sample_csv<R: Read>(reader: R) -> Result<SurveySample> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    let has_w = match header.len() {
        5 => false,
        6 => true,
        _ => {
            return Err(JelError::Schema(format!(
                "expected header {:?} (w optional), found {:?}",
                SAMPLE_HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            )))
        }
    };
    check_header(&header, &SAMPLE_HEADER[..header.len()])?;
    let mut units: Vec<usize> = Vec::new();
    let (mut y, mut x, mut pi, mut w): (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) =
        (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = row + 1;
        units.push(parse_unit(&rec, row)?);
        y.push(parse_field(&rec, 1, "y", row)?);
        x.push(parse_field(&rec, 2, "x", row)?);
        pi.push(parse_field(&rec, 3, "pi", row)?);
        let d: f64 = parse_field(&rec, 4, "d", row)?;
        let p: f64 = *pi.last().unwrap();
        if ((d * p) - 1.0).abs() > 1e-9 {
            return Err(JelError::Schema(format!(
                "row {row}: d = {d} is not 1/pi for pi = {p}"
            )));
        }
        if has_w {
            w.push(parse_field::<f64>(&rec, 5, "w", row)?);
        }
    }
    let sample = SurveySample::new(units, y, x, pi)?;
    if has_w {
        sample.with_calibration_weights(w)
    } else {
        Ok(sample)
    }
}
