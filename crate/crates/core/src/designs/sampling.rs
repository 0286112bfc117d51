//! Without-replacement sample selection: inclusion probabilities proportional
//! to size, the Rao-Sampford design, and simple random sampling.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{JelError, Result};

/// Default cap on rejected candidate samples before giving up.
pub const DEFAULT_MAX_ATTEMPTS: usize = 1_000_000;

const SUM_TOLERANCE: f64 = 1e-8;

/// Inclusion probabilities proportional to `size` for a fixed sample size
/// `n`, with units whose probability would reach 1 capped at 1 and the
/// remaining sample size spread over the rest.
pub fn inclusion_probabilities(size: &[f64], n: usize) -> Result<Vec<f64>> {
    let big_n = size.len();
    if n > big_n {
        return Err(JelError::InfeasibleDesign(format!(
            "sample size {n} exceeds population size {big_n}"
        )));
    }
    if let Some(i) = size.iter().position(|&z| !(z > 0.0 && z.is_finite())) {
        return Err(JelError::InvalidArgument(format!(
            "size measure must be positive and finite (unit {i} has {})",
            size[i]
        )));
    }
    let mut pi = vec![0.0; big_n];
    let mut capped = vec![false; big_n];
    let mut n_capped = 0usize;
    loop {
        let remaining = (n - n_capped) as f64;
        let open_total: f64 = size
            .iter()
            .zip(&capped)
            .filter_map(|(&z, &c)| (!c).then_some(z))
            .sum();
        let mut newly_capped = false;
        for i in 0..big_n {
            if capped[i] {
                pi[i] = 1.0;
                continue;
            }
            let p = remaining * size[i] / open_total;
            if p >= 1.0 {
                capped[i] = true;
                n_capped += 1;
                newly_capped = true;
            }
            pi[i] = p.min(1.0);
        }
        if !newly_capped || n_capped == n {
            if n_capped == n {
                for (p, &c) in pi.iter_mut().zip(&capped) {
                    *p = if c { 1.0 } else { 0.0 };
                }
            }
            return Ok(pi);
        }
    }
}

/// How a Rao-Sampford sample is realised. Both produce the same design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampfordMethod {
    /// Poisson samples with probabilities `pi` are drawn until one has size
    /// `n`; it is accepted with probability `sum_{i in s} (1 - pi_i) / n`.
    #[default]
    ConditionalPoisson,
    /// First unit with probability `pi_i / n`, the other `n - 1` with
    /// replacement proportional to `pi_i / (1 - pi_i)`; rejected unless all
    /// units are distinct. Acceptance collapses quickly as `n` grows.
    Multinomial,
}

fn validate_sampford(pi: &[f64]) -> Result<usize> {
    let big_n = pi.len();
    if let Some(i) = pi.iter().position(|&p| p >= 1.0) {
        return Err(JelError::DegenerateDesign(format!(
            "unit {i} has inclusion probability {} >= 1; handle certainty units separately",
            pi[i]
        )));
    }
    if let Some(i) = pi.iter().position(|&p| !(p > 0.0)) {
        return Err(JelError::InvalidArgument(format!(
            "inclusion probability of unit {i} must be positive, got {}",
            pi[i]
        )));
    }
    let total: f64 = pi.iter().sum();
    let n = total.round();
    if (total - n).abs() > SUM_TOLERANCE || n < 1.0 {
        return Err(JelError::InvalidArgument(format!(
            "inclusion probabilities must sum to a positive integer, got {total}"
        )));
    }
    let n = n as usize;
    if n >= big_n {
        return Err(JelError::DegenerateDesign(format!(
            "sample size {n} is not smaller than population size {big_n}"
        )));
    }
    Ok(n)
}

/// Draws a Rao-Sampford sample; returns sorted distinct unit indices.
pub fn rao_sampford_draw<R: Rng + ?Sized>(pi: &[f64], rng: &mut R) -> Result<Vec<usize>> {
    rao_sampford_draw_with(pi, SampfordMethod::default(), DEFAULT_MAX_ATTEMPTS, rng)
}

pub fn rao_sampford_draw_with<R: Rng + ?Sized>(
    pi: &[f64],
    method: SampfordMethod,
    max_attempts: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let n = validate_sampford(pi)?;
    let mut sample = match method {
        SampfordMethod::ConditionalPoisson => conditional_poisson(pi, n, max_attempts, rng)?,
        SampfordMethod::Multinomial => multinomial_rejective(pi, n, max_attempts, rng)?,
    };
    sample.sort_unstable();
    Ok(sample)
}

fn conditional_poisson<R: Rng + ?Sized>(
    pi: &[f64],
    n: usize,
    max_attempts: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let mut s = Vec::with_capacity(n + 1);
    for _ in 0..max_attempts {
        s.clear();
        for (i, &p) in pi.iter().enumerate() {
            if rng.random::<f64>() < p {
                s.push(i);
                if s.len() > n {
                    break;
                }
            }
        }
        if s.len() != n {
            continue;
        }
        let accept = s.iter().map(|&i| 1.0 - pi[i]).sum::<f64>() / n as f64;
        if rng.random::<f64>() < accept {
            return Ok(s);
        }
    }
    Err(JelError::NonConvergence {
        what: "Rao-Sampford selection",
        iterations: max_attempts,
    })
}

fn multinomial_rejective<R: Rng + ?Sized>(
    pi: &[f64],
    n: usize,
    max_attempts: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let first = WeightedIndex::new(pi).map_err(|e| JelError::InvalidArgument(e.to_string()))?;
    let odds: Vec<f64> = pi.iter().map(|&p| p / (1.0 - p)).collect();
    let rest = WeightedIndex::new(&odds).map_err(|e| JelError::InvalidArgument(e.to_string()))?;
    let mut taken = vec![false; pi.len()];
    let mut s = Vec::with_capacity(n);
    'attempt: for _ in 0..max_attempts {
        for &i in &s {
            taken[i] = false;
        }
        s.clear();
        let i = first.sample(rng);
        taken[i] = true;
        s.push(i);
        while s.len() < n {
            let j = rest.sample(rng);
            if taken[j] {
                continue 'attempt;
            }
            taken[j] = true;
            s.push(j);
        }
        return Ok(s);
    }
    Err(JelError::NonConvergence {
        what: "Rao-Sampford selection",
        iterations: max_attempts,
    })
}

/// Rao-Sampford selection where units with `pi_i = 1` are taken with
/// certainty and the design runs on the remaining units.
pub fn pps_draw<R: Rng + ?Sized>(pi: &[f64], rng: &mut R) -> Result<Vec<usize>> {
    let (certain, open): (Vec<usize>, Vec<usize>) = (0..pi.len()).partition(|&i| pi[i] >= 1.0);
    let open_pi: Vec<f64> = open.iter().map(|&i| pi[i]).collect();
    let open_total: f64 = open_pi.iter().sum();
    let mut sample = certain;
    if open_total.round() >= 1.0 {
        if (open_total.round() as usize) < open.len() {
            let drawn = rao_sampford_draw(&open_pi, rng)?;
            sample.extend(drawn.into_iter().map(|k| open[k]));
        } else {
            sample.extend(open);
        }
    }
    sample.sort_unstable();
    Ok(sample)
}

/// Simple random sample of `n` out of `big_n` units, sorted.
pub fn srswor_draw<R: Rng + ?Sized>(big_n: usize, n: usize, rng: &mut R) -> Result<Vec<usize>> {
    if n > big_n {
        return Err(JelError::InfeasibleDesign(format!(
            "sample size {n} exceeds population size {big_n}"
        )));
    }
    let mut s = rand::seq::index::sample(rng, big_n, n).into_vec();
    s.sort_unstable();
    Ok(s)
}
