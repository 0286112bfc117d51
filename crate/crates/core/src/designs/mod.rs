//! Finite populations, unequal-probability sample selection and survey
//! weights.

mod calibration;
pub mod io;
mod population;
mod sampling;

pub use calibration::calibration_weights;
pub use population::{
    generate_population, sigma_for_correlation, FinitePopulation, PopulationParams,
};
pub use sampling::{
    inclusion_probabilities, pps_draw, rao_sampford_draw, rao_sampford_draw_with, srswor_draw,
    SampfordMethod, DEFAULT_MAX_ATTEMPTS,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{JelError, Result};

/// Generator used for every random draw in the crate.
pub type SimRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Seed for sub-stream `stream` of `master`: a SplitMix64 finalizer applied
/// to the pair. Replicate `r` of a run uses `derive_seed(master, r)`, so
/// results do not depend on which worker handles which replicate.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master
        .wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x6A09_E667_F3BC_C909);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Which set of survey weights an estimator uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    Design,
    Calibration,
}

/// Units drawn from a population with their inclusion probabilities and
/// weights. `d` is always `1 / pi`; `w` holds calibration weights when known.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveySample {
    pub indices: Vec<usize>,
    pub y: Vec<f64>,
    pub x: Vec<f64>,
    pub pi: Vec<f64>,
    pub d: Vec<f64>,
    pub w: Option<Vec<f64>>,
}

impl SurveySample {
    /// Assembles a sample from its columns. Inclusion probabilities must lie
    /// in `(0, 1]` and unit indices must be distinct.
    pub fn new(indices: Vec<usize>, y: Vec<f64>, x: Vec<f64>, pi: Vec<f64>) -> Result<Self> {
        let n = indices.len();
        if y.len() != n || x.len() != n || pi.len() != n {
            return Err(JelError::InvalidArgument(format!(
                "column lengths differ: {} indices, {} y, {} x, {} pi",
                n,
                y.len(),
                x.len(),
                pi.len()
            )));
        }
        if let Some(i) = pi.iter().position(|&p| !(p > 0.0 && p <= 1.0)) {
            return Err(JelError::InvalidArgument(format!(
                "inclusion probability {} at row {i} is outside (0, 1]",
                pi[i]
            )));
        }
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(JelError::InvalidArgument("duplicate unit in sample".into()));
        }
        let d = pi.iter().map(|p| 1.0 / p).collect();
        Ok(SurveySample {
            indices,
            y,
            x,
            pi,
            d,
            w: None,
        })
    }

    /// Sample with externally supplied design weights (for files that carry
    /// weights rather than probabilities). `pi` is set to `1 / d`.
    pub fn from_design_weights(y: Vec<f64>, x: Vec<f64>, d: Vec<f64>) -> Result<Self> {
        if let Some(i) = d.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(JelError::InvalidArgument(format!(
                "design weight {} at row {i} must be positive",
                d[i]
            )));
        }
        let n = y.len();
        if d.len() != n || x.len() != n {
            return Err(JelError::InvalidArgument(format!(
                "column lengths differ: {} y, {} x, {} d",
                n,
                x.len(),
                d.len()
            )));
        }
        Ok(SurveySample {
            indices: (0..n).collect(),
            y,
            x,
            pi: d.iter().map(|v| 1.0 / v).collect(),
            d,
            w: None,
        })
    }

    /// Extracts `indices` from the population with probabilities `pi_all`.
    pub fn from_population(
        pop: &FinitePopulation,
        pi_all: &[f64],
        indices: Vec<usize>,
    ) -> Result<Self> {
        let y = indices.iter().map(|&i| pop.y[i]).collect();
        let x = indices.iter().map(|&i| pop.x[i]).collect();
        let pi = indices.iter().map(|&i| pi_all[i]).collect();
        SurveySample::new(indices, y, x, pi)
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// Attaches linearly calibrated weights reproducing the known mean `x_bar`.
    pub fn calibrate(&mut self, x_bar: f64) -> Result<()> {
        self.w = Some(calibration_weights(&self.d, &self.x, x_bar)?);
        Ok(())
    }

    pub fn with_calibration_weights(mut self, w: Vec<f64>) -> Result<Self> {
        if w.len() != self.n() {
            return Err(JelError::InvalidArgument(format!(
                "{} calibration weights for a sample of {}",
                w.len(),
                self.n()
            )));
        }
        if let Some(index) = w.iter().position(|&v| !(v > 0.0)) {
            return Err(JelError::PositivityViolation {
                index,
                weight: w[index],
            });
        }
        self.w = Some(w);
        Ok(self)
    }

    pub fn raw_weights(&self, mode: WeightMode) -> Result<&[f64]> {
        match mode {
            WeightMode::Design => Ok(&self.d),
            WeightMode::Calibration => self
                .w
                .as_deref()
                .ok_or(JelError::MissingWeights("calibration")),
        }
    }

    /// Weights of the requested kind scaled to sum to one.
    pub fn normalized_weights(&self, mode: WeightMode) -> Result<Vec<f64>> {
        let raw = self.raw_weights(mode)?;
        let total: f64 = raw.iter().sum();
        Ok(raw.iter().map(|v| v / total).collect())
    }
}
