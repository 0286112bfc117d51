use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::designs::seeded_rng;
use crate::error::{JelError, Result};

/// Parameters used to generate a [`FinitePopulation`] from the linear model
/// `y = beta0 + beta1 * x + sigma * eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationParams {
    pub beta0: f64,
    pub beta1: f64,
    pub sigma: f64,
    pub rho: f64,
    pub shift: f64,
    pub seed: u64,
}

/// A finite population frame with a scalar auxiliary variable `x` that also
/// serves as the size measure.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePopulation {
    pub y: Vec<f64>,
    pub x: Vec<f64>,
    pub x_bar: f64,
    pub params: Option<PopulationParams>,
}

impl FinitePopulation {
    /// Builds a frame from observed values. `x` must be strictly positive.
    pub fn new(y: Vec<f64>, x: Vec<f64>) -> Result<Self> {
        if y.len() != x.len() {
            return Err(JelError::InvalidArgument(format!(
                "y has {} values but x has {}",
                y.len(),
                x.len()
            )));
        }
        if y.len() < 2 {
            return Err(JelError::SampleTooSmall {
                n: y.len(),
                required: 2,
            });
        }
        if let Some(index) = y.iter().chain(&x).position(|v| !v.is_finite()) {
            return Err(JelError::NonFiniteInput {
                index: index % y.len(),
            });
        }
        if let Some(i) = x.iter().position(|&v| v <= 0.0) {
            return Err(JelError::InvalidArgument(format!(
                "size measure x must be positive (unit {i} has {})",
                x[i]
            )));
        }
        let x_bar = x.iter().sum::<f64>() / x.len() as f64;
        Ok(FinitePopulation {
            y,
            x,
            x_bar,
            params: None,
        })
    }

    pub fn size(&self) -> usize {
        self.y.len()
    }
}

/// Error standard deviation giving `corr(y, x) = rho` when `x ~ exp(1)`.
pub fn sigma_for_correlation(beta1: f64, rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(JelError::InvalidCorrelation(rho));
    }
    // sd(exp(1)) = 1, and shifting x changes neither sd(x) nor the correlation.
    Ok(beta1.abs() * (1.0 / (rho * rho) - 1.0).sqrt())
}

/// Draws a population of size `n_units` with `x_i = shift + exp(1)` and
/// normal errors scaled so the model correlation between `y` and `x` is `rho`.
pub fn generate_population(
    n_units: usize,
    beta0: f64,
    beta1: f64,
    rho: f64,
    shift: f64,
    seed: u64,
) -> Result<FinitePopulation> {
    if n_units < 2 {
        return Err(JelError::InvalidArgument(format!(
            "population size must be at least 2, got {n_units}"
        )));
    }
    if !(shift >= 0.0 && shift.is_finite()) {
        return Err(JelError::InvalidArgument(format!(
            "shift must be a finite non-negative number, got {shift}"
        )));
    }
    let sigma = sigma_for_correlation(beta1, rho)?;
    let mut rng = seeded_rng(seed);
    let mut x = Vec::with_capacity(n_units);
    let mut y = Vec::with_capacity(n_units);
    for _ in 0..n_units {
        let e: f64 = rng.sample(Exp1);
        let eps: f64 = rng.sample(StandardNormal);
        let xi = e + shift;
        x.push(xi);
        y.push(beta0 + beta1 * xi + sigma * eps);
    }
    // exp(1) draws can be exactly zero in principle; the frame requires x > 0.
    for xi in x.iter_mut() {
        if *xi <= 0.0 {
            *xi = f64::MIN_POSITIVE;
        }
    }
    let mut pop = FinitePopulation::new(y, x)?;
    pop.params = Some(PopulationParams {
        beta0,
        beta1,
        sigma,
        rho,
        shift,
        seed,
    });
    Ok(pop)
}
