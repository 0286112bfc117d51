use std::fmt;
use std::fs::File;
use std::path::{Path, PathBuf};

use crate::designs::{SurveySample, WeightMode};
use crate::error::{JelError, Result};
use crate::inference::{
    design_effect, normal_ci, profile_ci, ConfidenceInterval, DeffMode, Method,
};
use crate::ustat::{jackknife_pseudo_values, Kernel};

/// Column names and settings for analysing one sample file.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOptions {
    pub path: PathBuf,
    pub y_column: String,
    pub d_column: String,
    pub w_column: Option<String>,
    pub x_column: Option<String>,
    pub x_bar: Option<f64>,
    pub kernel_name: String,
    pub method: Method,
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub n: usize,
    pub kernel: String,
    pub t_n: f64,
    pub interval: ConfidenceInterval,
    pub deff: f64,
    pub n_eff: f64,
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ci = &self.interval;
        writeln!(f, "method: {}", ci.method)?;
        writeln!(f, "kernel: {}", self.kernel)?;
        writeln!(f, "n: {}", self.n)?;
        writeln!(f, "u_statistic: {}", self.t_n)?;
        writeln!(f, "point: {}", ci.point)?;
        writeln!(f, "level: {}", ci.level)?;
        writeln!(f, "lower: {}", ci.lower)?;
        writeln!(f, "upper: {}", ci.upper)?;
        writeln!(f, "deff: {}", self.deff)?;
        write!(f, "n_eff: {}", self.n_eff)
    }
}

fn column(header: &csv::StringRecord, name: &str) -> Result<usize> {
    header
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| JelError::Schema(format!("column {name:?} not found")))
}

fn read_columns(path: &Path, names: &[&str]) -> Result<Vec<Vec<f64>>> {
    let file = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => JelError::FileNotFound(path.display().to_string()),
        _ => JelError::Io(e.to_string()),
    })?;
    let mut rdr = csv::Reader::from_reader(file);
    let header = rdr.headers()?.clone();
    let idx = names
        .iter()
        .map(|n| column(&header, n))
        .collect::<Result<Vec<_>>>()?;
    let mut cols = vec![Vec::new(); names.len()];
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        for ((col, &i), name) in cols.iter_mut().zip(&idx).zip(names) {
            let raw = rec.get(i).unwrap_or("").trim();
            let v: f64 = raw.parse().map_err(|_| {
                JelError::Schema(format!(
                    "row {}: cannot parse {name} value {raw:?}",
                    row + 1
                ))
            })?;
            if !v.is_finite() {
                return Err(JelError::Schema(format!(
                    "row {}: {name} value is not finite",
                    row + 1
                )));
            }
            col.push(v);
        }
    }
    Ok(cols)
}

/// Reads a sample file and computes the requested interval.
///
/// JEL_d needs `x_column` and `x_bar`; JEL_w needs `w_column` and uses the
/// auxiliary mean for its scale when it is given.
pub fn analyze_file(opts: &AnalyzeOptions) -> Result<AnalysisReport> {
    let kernel = Kernel::by_name(&opts.kernel_name)?;
    if opts.method == Method::JelW && opts.w_column.is_none() {
        return Err(JelError::Schema(
            "JEL_w needs a calibration weight column".into(),
        ));
    }
    if opts.method.needs_auxiliary() && (opts.x_column.is_none() || opts.x_bar.is_none()) {
        return Err(JelError::Schema(format!(
            "{} needs an auxiliary column and its population mean",
            opts.method
        )));
    }
    if opts.x_bar.is_some() && opts.x_column.is_none() {
        return Err(JelError::Schema(
            "an auxiliary mean was given without a column".into(),
        ));
    }
    let x_bar = opts.x_bar.filter(|_| opts.x_column.is_some());

    let mut names = vec![opts.y_column.as_str(), opts.d_column.as_str()];
    names.extend(opts.x_column.as_deref());
    names.extend(opts.w_column.as_deref());
    let mut cols = read_columns(&opts.path, &names)?.into_iter();
    let y = cols.next().expect("y column");
    let d = cols.next().expect("d column");
    let x = match opts.x_column {
        Some(_) => cols.next().expect("x column"),
        None => vec![1.0; y.len()],
    };
    let mut sample = SurveySample::from_design_weights(y, x, d)?;
    if opts.w_column.is_some() {
        sample = sample.with_calibration_weights(cols.next().expect("w column"))?;
    }

    let pv = jackknife_pseudo_values(&sample.y, &kernel)?;
    let interval = match opts.method {
        Method::Na => normal_ci(&sample, &pv, opts.level, WeightMode::Design)?,
        m => profile_ci(&sample, &pv, m, opts.level, x_bar)?,
    };
    let (deff_mode, weights) = match (opts.method, x_bar) {
        (Method::Na | Method::Jel, _) => (DeffMode::Hajek, WeightMode::Design),
        (Method::JelD, _) => (DeffMode::Greg, WeightMode::Design),
        (Method::JelW, None) => (DeffMode::Hajek, WeightMode::Calibration),
        (Method::JelW, Some(_)) => (DeffMode::Greg, WeightMode::Calibration),
    };
    let (deff, n_eff) = if interval.diagnostics.degenerate {
        (f64::NAN, f64::NAN)
    } else {
        let s = design_effect(&sample, &pv, deff_mode, weights, x_bar)?;
        (s.deff, s.n_eff)
    };
    Ok(AnalysisReport {
        n: sample.n(),
        kernel: kernel.name().to_string(),
        t_n: pv.t_n,
        interval,
        deff,
        n_eff,
    })
}
