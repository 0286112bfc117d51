use crate::error::{JelError, Result};

/// Linear (chi-square distance) calibration of design weights.
///
/// Returns `w_i = d_i * (1 + lambda * (x_i - xbar_d))`, where `xbar_d` is the
/// `d`-weighted sample mean of `x`. Centring at `xbar_d` keeps
/// `sum w_i = sum d_i`, and `lambda` is chosen so that the normalized weights
/// reproduce `x_bar` exactly.
pub fn calibration_weights(d: &[f64], x: &[f64], x_bar: f64) -> Result<Vec<f64>> {
    if d.len() != x.len() {
        return Err(JelError::InvalidArgument(format!(
            "{} design weights but {} auxiliary values",
            d.len(),
            x.len()
        )));
    }
    if d.is_empty() {
        return Err(JelError::SampleTooSmall { n: 0, required: 1 });
    }
    let d_total: f64 = d.iter().sum();
    let x_hat = d.iter().zip(x).map(|(di, xi)| di * xi).sum::<f64>() / d_total;
    let spread: f64 = d
        .iter()
        .zip(x)
        .map(|(di, xi)| di * (xi - x_hat) * (xi - x_hat))
        .sum();
    let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    if spread <= (f64::EPSILON * scale).powi(2) * d_total {
        if (x_hat - x_bar).abs() <= 1e-12 * scale {
            return Ok(d.to_vec());
        }
        return Err(JelError::DegenerateAuxiliary);
    }
    let lambda = (x_bar - x_hat) * d_total / spread;
    let w: Vec<f64> = d
        .iter()
        .zip(x)
        .map(|(di, xi)| di * (1.0 + lambda * (xi - x_hat)))
        .collect();
    if let Some(index) = w.iter().position(|&wi| wi <= 0.0) {
        return Err(JelError::PositivityViolation {
            index,
            weight: w[index],
        });
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn already_calibrated() {
        let d = [1.0, 3.0, 2.0];
        let x = [1.0, 2.0, 4.0];
        let x_bar = (1.0 + 6.0 + 8.0) / 6.0;
        let w = calibration_weights(&d, &x, x_bar).unwrap();
        for (wi, di) in w.iter().zip(&d) {
            assert_relative_eq!(*wi, *di, epsilon = 1e-14);
        }
    }

    #[test]
    fn two_point_example() {
        let w = calibration_weights(&[1.0, 1.0], &[0.0, 2.0], 1.5).unwrap();
        assert_relative_eq!(w[0], 0.5, epsilon = 1e-14);
        assert_relative_eq!(w[1], 1.5, epsilon = 1e-14);
    }

    #[test]
    fn degenerate_and_negative() {
        assert_eq!(
            calibration_weights(&[1.0, 2.0], &[3.0, 3.0], 4.0),
            Err(JelError::DegenerateAuxiliary)
        );
        assert!(matches!(
            calibration_weights(&[1.0, 1.0], &[0.0, 2.0], 5.0),
            Err(JelError::PositivityViolation { index: 0, .. })
        ));
    }

    #[test]
    fn calibration_property_holds() {
        let d = [10.0, 4.0, 7.5, 2.0, 12.0];
        let x = [1.2, 3.4, 2.2, 5.1, 0.9];
        let w = calibration_weights(&d, &x, 2.1).unwrap();
        let total: f64 = w.iter().sum();
        let x_cal = w.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() / total;
        assert_relative_eq!(x_cal, 2.1, max_relative = 1e-12);
        assert_relative_eq!(total, d.iter().sum::<f64>(), max_relative = 1e-12);
    }
}
