//! `jelsurvey`: run coverage simulations, analyse sample files and draw
//! samples from population frames.
//!
//! Exit status is 0 on success, 2 for configuration, schema or usage
//! errors and 3 for numerical failures.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jelsurvey_core::designs::io::{read_population_csv, write_sample_csv};
use jelsurvey_core::inference::Method;
use jelsurvey_core::simharness::{
    analyze_file, draw_sample, emit_report, run_simulation, AnalyzeOptions, ReportFormat,
    SampleDesign, SimulationConfig,
};
use jelsurvey_core::{JelError, Result};

#[derive(Parser)]
#[command(
    name = "jelsurvey",
    version,
    about = "Jackknife pseudo-empirical likelihood intervals for U-statistics under survey sampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo coverage study described by a key = value config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Confidence interval for a U-statistic from a weighted sample file.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// Study variable column.
        #[arg(long)]
        y: String,
        /// Design weight column.
        #[arg(long)]
        d: String,
        /// Calibration weight column (required for JEL_w).
        #[arg(long)]
        w: Option<String>,
        /// Auxiliary variable column.
        #[arg(long, requires = "xbar")]
        x: Option<String>,
        /// Known population mean of the auxiliary variable.
        #[arg(long, requires = "x")]
        xbar: Option<f64>,
        #[arg(long)]
        kernel: String,
        /// One of NA, JEL, JEL_d, JEL_w.
        #[arg(long)]
        method: Method,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
    },
    /// Draw one sample from a population file (`unit,y,x,pi`) and print it as CSV.
    Sample {
        #[arg(long)]
        population: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "sampford")]
        design: SampleDesign,
    },
}

fn open_input(path: &PathBuf) -> Result<File> {
    File::open(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => JelError::FileNotFound(path.display().to_string()),
        _ => JelError::Io(e.to_string()),
    })
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate {
            config,
            format,
            out,
        } => {
            let config = SimulationConfig::from_file(&config)?;
            let report = run_simulation(&config)?;
            write_output(out.as_ref(), &emit_report(&report, format)?)
        }
        Command::Analyze {
            input,
            y,
            d,
            w,
            x,
            xbar,
            kernel,
            method,
            level,
        } => {
            let report = analyze_file(&AnalyzeOptions {
                path: input,
                y_column: y,
                d_column: d,
                w_column: w,
                x_column: x,
                x_bar: xbar,
                kernel_name: kernel,
                method,
                level,
            })?;
            println!("{report}");
            Ok(())
        }
        Command::Sample {
            population,
            n,
            seed,
            design,
        } => {
            let (pop, _) = read_population_csv(open_input(&population)?)?;
            let sample = draw_sample(&pop, n, design, seed)?;
            write_sample_csv(io::stdout().lock(), &sample)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage_error() { 2 } else { 3 })
        }
    }
}
