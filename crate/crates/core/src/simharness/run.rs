use std::str::FromStr;

use rayon::prelude::*;

use crate::designs::{
    derive_seed, generate_population, inclusion_probabilities, pps_draw, seeded_rng, srswor_draw,
    FinitePopulation, SurveySample, WeightMode,
};
use crate::error::{JelError, Result};
use crate::inference::{greg_estimate, hajek_estimate, normal_ci_with, profile_ci_with, Method};
use crate::simharness::config::{DeffSource, SimulationConfig};
use crate::ustat::{jackknife_pseudo_values, u_statistic, Kernel, PseudoValueSet};

// Stream identifiers under the master seed.
const POPULATION_STREAM: u64 = 1;
const REPLICATE_STREAM: u64 = 2;

/// Seed of the population generated for the `rho_index`-th correlation.
pub fn population_seed(master: u64, rho_index: usize) -> u64 {
    derive_seed(derive_seed(master, POPULATION_STREAM), rho_index as u64)
}

/// Seed from which the replicate seeds of one `(rho, n)` cell are derived.
pub fn cell_seed(master: u64, rho_index: usize, n_index: usize) -> u64 {
    let cells = derive_seed(master, REPLICATE_STREAM);
    derive_seed(derive_seed(cells, rho_index as u64), n_index as u64)
}

/// Selection scheme for drawing one sample from a population file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleDesign {
    /// Rao-Sampford with probabilities proportional to `x`.
    Sampford,
    Srswor,
}

impl FromStr for SampleDesign {
    type Err = JelError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sampford" => Ok(SampleDesign::Sampford),
            "srswor" => Ok(SampleDesign::Srswor),
            other => Err(JelError::Config(format!(
                "design must be `sampford` or `srswor`, got {other:?}"
            ))),
        }
    }
}

/// Draws a sample of size `n`. Calibration weights to the population mean
/// of `x` are attached when they exist and are all positive.
pub fn draw_sample(
    pop: &FinitePopulation,
    n: usize,
    design: SampleDesign,
    seed: u64,
) -> Result<SurveySample> {
    let mut rng = seeded_rng(seed);
    let big_n = pop.size();
    let (pi, indices) = match design {
        SampleDesign::Sampford => {
            let pi = inclusion_probabilities(&pop.x, n)?;
            let s = pps_draw(&pi, &mut rng)?;
            (pi, s)
        }
        SampleDesign::Srswor => {
            if n == 0 || n > big_n {
                return Err(JelError::InfeasibleDesign(format!(
                    "cannot draw {n} of {big_n} units"
                )));
            }
            (
                vec![n as f64 / big_n as f64; big_n],
                srswor_draw(big_n, n, &mut rng)?,
            )
        }
    };
    let mut sample = SurveySample::from_population(pop, &pi, indices)?;
    if sample.calibrate(pop.x_bar).is_err() {
        sample.w = None;
    }
    Ok(sample)
}

/// One replicate of a cell: a Rao-Sampford sample drawn with `pi` and the
/// pseudo-values of its `y`. Calibration weights are attached when they
/// are all positive and left out otherwise.
pub fn draw_replicate(
    pop: &FinitePopulation,
    pi: &[f64],
    kernel: &Kernel,
    seed: u64,
) -> Result<(SurveySample, PseudoValueSet)> {
    let mut rng = seeded_rng(seed);
    let indices = pps_draw(pi, &mut rng)?;
    let mut sample = SurveySample::from_population(pop, pi, indices)?;
    if sample.calibrate(pop.x_bar).is_err() {
        sample.w = None;
    }
    let pv = jackknife_pseudo_values(&sample.y, kernel)?;
    Ok((sample, pv))
}

/// Point estimate whose variance a method's scale is built on.
fn method_point(
    method: Method,
    sample: &SurveySample,
    pv: &PseudoValueSet,
    x_bar: f64,
) -> Result<f64> {
    match method {
        Method::Na | Method::Jel => hajek_estimate(sample, pv, WeightMode::Design),
        Method::JelD => Ok(greg_estimate(sample, pv, x_bar)?.estimate),
        Method::JelW => hajek_estimate(sample, pv, WeightMode::Calibration),
    }
}

/// Interval of one method for one replicate.
pub fn method_interval(
    method: Method,
    sample: &SurveySample,
    pv: &PseudoValueSet,
    level: f64,
    x_bar: f64,
    v_p_override: Option<f64>,
) -> Result<(f64, f64)> {
    let ci = match method {
        Method::Na => normal_ci_with(sample, pv, level, WeightMode::Design, v_p_override)?,
        _ => profile_ci_with(sample, pv, method, level, Some(x_bar), v_p_override)?,
    };
    if ci.lower.is_finite() && ci.upper.is_finite() {
        Ok((ci.lower, ci.upper))
    } else {
        Err(JelError::DegenerateSample(
            "interval endpoint is not finite".into(),
        ))
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

/// Results of one method in one `(rho, n)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub rho: f64,
    pub n: usize,
    pub method: Method,
    pub theta_true: f64,
    pub replicates: usize,
    pub covered: usize,
    /// Replicates with `theta_true` below the lower bound.
    pub below: usize,
    /// Replicates with `theta_true` above the upper bound.
    pub above: usize,
    pub failed: usize,
    /// Coverage in percent of the replicates that produced an interval.
    pub cp: f64,
    /// Lower-tail error rate in percent.
    pub l: f64,
    /// Upper-tail error rate in percent.
    pub u: f64,
    /// Average length.
    pub al: f64,
    /// Average lower bound.
    pub lb: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub config: SimulationConfig,
    pub cells: Vec<CellResult>,
}

impl SimulationReport {
    pub fn cell(&self, rho: f64, n: usize, method: Method) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.rho == rho && c.n == n && c.method == method)
    }
}

fn tally(
    rho: f64,
    n: usize,
    method: Method,
    theta: f64,
    outcomes: impl Iterator<Item = Option<(f64, f64)>>,
) -> CellResult {
    let (mut covered, mut below, mut above, mut failed, mut replicates) = (0, 0, 0, 0, 0);
    let mut len = CompensatedSum::default();
    let mut lb = CompensatedSum::default();
    for outcome in outcomes {
        replicates += 1;
        match outcome {
            None => failed += 1,
            Some((lo, hi)) => {
                if theta < lo {
                    below += 1;
                } else if theta > hi {
                    above += 1;
                } else {
                    covered += 1;
                }
                len.add(hi - lo);
                lb.add(lo);
            }
        }
    }
    let ok = replicates - failed;
    let pct = |k: usize| {
        if ok > 0 {
            100.0 * k as f64 / ok as f64
        } else {
            f64::NAN
        }
    };
    let avg = |s: CompensatedSum| {
        if ok > 0 {
            s.value() / ok as f64
        } else {
            f64::NAN
        }
    };
    CellResult {
        rho,
        n,
        method,
        theta_true: theta,
        replicates,
        covered,
        below,
        above,
        failed,
        cp: pct(covered),
        l: pct(below),
        u: pct(above),
        al: avg(len),
        lb: avg(lb),
    }
}

/// Sample variance of the finite entries of `values`.
fn monte_carlo_variance(values: &[Option<f64>]) -> Option<f64> {
    let finite: Vec<f64> = values
        .iter()
        .flatten()
        .copied()
        .filter(|v| v.is_finite())
        .collect();
    if finite.len() < 2 {
        return None;
    }
    let m = finite.len() as f64;
    let mean = finite.iter().sum::<f64>() / m;
    Some(finite.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1.0))
}

/// Runs every `(rho, n)` cell of the configuration.
///
/// Replicates are spread over the rayon thread pool, but each one draws
/// from its own seeded stream and results are reduced in replicate order,
/// so the report is identical for any number of threads.
pub fn run_simulation(config: &SimulationConfig) -> Result<SimulationReport> {
    config.validate()?;
    let kernel = Kernel::by_name(&config.kernel_name)?;
    let mut cells = Vec::new();
    for (ri, &rho) in config.rho_list.iter().enumerate() {
        let pop = generate_population(
            config.population_size,
            config.beta0,
            config.beta1,
            rho,
            config.shift,
            population_seed(config.master_seed, ri),
        )?;
        let theta = u_statistic(&pop.y, &kernel)?;
        for (ni, &n) in config.n_list.iter().enumerate() {
            let pi = inclusion_probabilities(&pop.x, n)?;
            let seed = cell_seed(config.master_seed, ri, ni);
            cells.extend(run_cell(config, &kernel, &pop, &pi, theta, rho, n, seed));
        }
    }
    Ok(SimulationReport {
        config: config.clone(),
        cells,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_cell(
    config: &SimulationConfig,
    kernel: &Kernel,
    pop: &FinitePopulation,
    pi: &[f64],
    theta: f64,
    rho: f64,
    n: usize,
    seed: u64,
) -> Vec<CellResult> {
    let x_bar = pop.x_bar;
    let replicates: Vec<Option<(SurveySample, PseudoValueSet)>> = (0..config.replicates)
        .into_par_iter()
        .map(|r| draw_replicate(pop, pi, kernel, derive_seed(seed, r as u64)).ok())
        .collect();

    let overrides: Vec<Option<f64>> = match config.deff_source {
        DeffSource::Estimated => vec![None; config.methods.len()],
        DeffSource::MonteCarlo => config
            .methods
            .iter()
            .map(|&m| {
                let points: Vec<Option<f64>> = replicates
                    .par_iter()
                    .map(|rep| {
                        rep.as_ref()
                            .and_then(|(s, pv)| method_point(m, s, pv, x_bar).ok())
                    })
                    .collect();
                monte_carlo_variance(&points)
            })
            .collect(),
    };

    let outcomes: Vec<Vec<Option<(f64, f64)>>> = replicates
        .par_iter()
        .map(|rep| {
            config
                .methods
                .iter()
                .zip(&overrides)
                .map(|(&m, &v)| {
                    let (s, pv) = rep.as_ref()?;
                    method_interval(m, s, pv, config.level, x_bar, v).ok()
                })
                .collect()
        })
        .collect();

    config
        .methods
        .iter()
        .enumerate()
        .map(|(k, &m)| tally(rho, n, m, theta, outcomes.iter().map(|o| o[k])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_accounting() {
        let outcomes = vec![
            Some((0.0, 2.0)),
            Some((1.5, 2.0)),
            Some((-1.0, 0.5)),
            None,
            Some((0.5, 1.5)),
        ];
        let c = tally(0.3, 10, Method::Jel, 1.0, outcomes.into_iter());
        assert_eq!((c.covered, c.below, c.above, c.failed), (2, 1, 1, 1));
        assert_eq!(c.covered + c.below + c.above + c.failed, c.replicates);
        assert_eq!(c.cp, 50.0);
        assert_eq!(c.cp + c.l + c.u, 100.0);
        assert!((c.al - (2.0 + 0.5 + 1.5 + 1.0) / 4.0).abs() < 1e-15);
        assert!((c.lb - 1.0 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn compensated_sum_keeps_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1e16);
        for _ in 0..10 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 10.0);
    }

    #[test]
    fn small_run_is_deterministic_and_consistent() {
        let config = SimulationConfig {
            population_size: 200,
            n_list: vec![20],
            rho_list: vec![0.5],
            replicates: 40,
            kernel_name: "variance".into(),
            ..SimulationConfig::default()
        };
        let a = run_simulation(&config).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_simulation(&config).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.cells.len(), 4);
        for c in &a.cells {
            assert_eq!(c.covered + c.below + c.above + c.failed, 40);
            assert!(c.al > 0.0);
        }
    }
}
