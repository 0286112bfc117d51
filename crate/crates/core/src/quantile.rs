//! Normal and chi-square quantiles.

use statrs::distribution::{ChiSquared, Continuous, ContinuousCDF, Normal};

use crate::error::{JelError, Result};

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(JelError::InvalidArgument(format!(
            "probability must lie in (0, 1), got {p}"
        )))
    }
}

pub fn normal_quantile(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(Normal::standard().inverse_cdf(p))
}

/// Chi-square quantile: Wilson-Hilferty starting point polished by Newton
/// steps on the CDF, falling back to bisection if a step leaves the bracket.
pub fn chi_squared_quantile(p: f64, df: f64) -> Result<f64> {
    check_probability(p)?;
    if !(df > 0.0 && df.is_finite()) {
        return Err(JelError::InvalidArgument(format!(
            "degrees of freedom must be positive, got {df}"
        )));
    }
    let dist = ChiSquared::new(df).map_err(|e| JelError::InvalidArgument(e.to_string()))?;
    let z = normal_quantile(p)?;
    let c = 2.0 / (9.0 * df);
    let mut x = (df * (1.0 - c + z * c.sqrt()).powi(3)).max(1e-8);

    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    for _ in 0..200 {
        let err = dist.cdf(x) - p;
        if err > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        if err.abs() <= 1e-15 {
            break;
        }
        let density = dist.pdf(x);
        let mut next = x - err / density;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = if hi.is_finite() {
                0.5 * (lo + hi)
            } else {
                2.0 * x
            };
        }
        if (next - x).abs() <= 1e-15 * x {
            x = next;
            break;
        }
        x = next;
    }
    Ok(x)
}
