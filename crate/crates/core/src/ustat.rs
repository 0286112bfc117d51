//! One-sample U-statistics and their jackknife pseudo-values.
//!
//! A [`Kernel`] is a symmetric function of `degree` real arguments. The
//! U-statistic is the kernel averaged over every unordered subset of that
//! size, and the pseudo-value of unit `i` is `n*T_n - (n-1)*T_{n-1}^{(-i)}`.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{JelError, Result};

pub type KernelFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// Symmetric kernel defining a U-statistic parameter.
#[derive(Clone)]
pub struct Kernel {
    name: String,
    degree: usize,
    eval: Arc<KernelFn>,
}

impl Kernel {
    /// Wraps `f` as a kernel of the given degree. `f` must be symmetric in
    /// its arguments; it always receives exactly `degree` values.
    pub fn new<F>(name: impl Into<String>, degree: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        assert!(degree >= 1, "kernel degree must be at least 1");
        Kernel {
            name: name.into(),
            degree,
            eval: Arc::new(f),
        }
    }

    /// `h(x, y) = (x - y)^2 / 2`, whose U-statistic is the sample variance.
    pub fn variance() -> Self {
        Kernel::new("variance", 2, |a| {
            let d = a[0] - a[1];
            0.5 * d * d
        })
    }

    /// `h(x, y) = max(x, y) / 2`, the probability weighted moment `E{y F(y)}`.
    pub fn pwm() -> Self {
        Kernel::new("pwm", 2, |a| 0.5 * a[0].max(a[1]))
    }

    /// Looks up a built-in kernel.
    pub fn by_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "variance" => Ok(Kernel::variance()),
            "pwm" => Ok(Kernel::pwm()),
            _ => Err(JelError::UnknownKernel(name.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn eval(&self, args: &[f64]) -> f64 {
        debug_assert_eq!(args.len(), self.degree);
        (self.eval)(args)
    }
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .finish()
    }
}

/// The full-sample U-statistic together with the jackknife pseudo-values.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoValueSet {
    pub t_n: f64,
    pub values: Vec<f64>,
}

impl PseudoValueSet {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Unweighted mean of the pseudo-values; equals `t_n` up to rounding.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// `max_i |V_i|`, used to monitor the growth of pseudo-values with `n`.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(JelError::NonFiniteInput { index }),
        None => Ok(()),
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

fn u_statistic_unchecked(values: &[f64], kernel: &Kernel) -> f64 {
    let n = values.len();
    match kernel.degree() {
        1 => values.iter().map(|&v| kernel.eval(&[v])).sum::<f64>() / n as f64,
        2 => {
            let mut sum = 0.0;
            for i in 0..n {
                let yi = values[i];
                for &yj in &values[i + 1..] {
                    sum += kernel.eval(&[yi, yj]);
                }
            }
            sum / binomial(n, 2)
        }
        m => {
            let mut args = vec![0.0; m];
            let mut sum = 0.0;
            for combo in (0..n).combinations(m) {
                for (slot, &idx) in args.iter_mut().zip(&combo) {
                    *slot = values[idx];
                }
                sum += kernel.eval(&args);
            }
            sum / binomial(n, m)
        }
    }
}

/// Average of the kernel over all unordered `degree`-subsets of `values`.
pub fn u_statistic(values: &[f64], kernel: &Kernel) -> Result<f64> {
    let m = kernel.degree();
    if values.len() < m {
        return Err(JelError::SampleTooSmall {
            n: values.len(),
            required: m,
        });
    }
    check_finite(values)?;
    Ok(u_statistic_unchecked(values, kernel))
}

/// U-statistic of the sample with position `i` (zero-based) removed.
pub fn leave_one_out(values: &[f64], kernel: &Kernel, i: usize) -> Result<f64> {
    let n = values.len();
    if n < kernel.degree() + 1 {
        return Err(JelError::SampleTooSmall {
            n,
            required: kernel.degree() + 1,
        });
    }
    if i >= n {
        return Err(JelError::IndexOutOfRange { index: i, n });
    }
    check_finite(values)?;
    let rest: Vec<f64> = values
        .iter()
        .enumerate()
        .filter_map(|(j, &v)| (j != i).then_some(v))
        .collect();
    Ok(u_statistic_unchecked(&rest, kernel))
}

/// Jackknife pseudo-values `V_i = n*T_n - (n-1)*T_{n-1}^{(-i)}`.
///
/// Degree-2 kernels use per-unit row sums `S_i = sum_{j != i} h(y_i, y_j)`,
/// so that `T_{n-1}^{(-i)} = (S - S_i) / C(n-1, 2)` with `S` the sum over all
/// pairs; total cost is `O(n^2)`. Other degrees recompute every
/// leave-one-out statistic.
pub fn jackknife_pseudo_values(values: &[f64], kernel: &Kernel) -> Result<PseudoValueSet> {
    if kernel.degree() != 2 {
        return jackknife_pseudo_values_naive(values, kernel);
    }
    let n = values.len();
    if n < 3 {
        return Err(JelError::SampleTooSmall { n, required: 3 });
    }
    check_finite(values)?;

    let mut row = vec![0.0; n];
    for i in 0..n {
        let yi = values[i];
        for j in i + 1..n {
            let h = kernel.eval(&[yi, values[j]]);
            row[i] += h;
            row[j] += h;
        }
    }
    let total = row.iter().sum::<f64>() / 2.0;
    let nf = n as f64;
    let t_n = total / binomial(n, 2);
    let loo_pairs = binomial(n - 1, 2);
    let values = row
        .iter()
        .map(|&s_i| nf * t_n - (nf - 1.0) * (total - s_i) / loo_pairs)
        .collect();
    Ok(PseudoValueSet { t_n, values })
}

/// Pseudo-values by direct recomputation of every leave-one-out statistic.
pub fn jackknife_pseudo_values_naive(values: &[f64], kernel: &Kernel) -> Result<PseudoValueSet> {
    let n = values.len();
    let m = kernel.degree();
    if n < m + 1 {
        return Err(JelError::SampleTooSmall { n, required: m + 1 });
    }
    check_finite(values)?;
    let t_n = u_statistic_unchecked(values, kernel);
    let nf = n as f64;
    let mut rest = Vec::with_capacity(n - 1);
    let pseudo = (0..n)
        .map(|i| {
            rest.clear();
            rest.extend(
                values
                    .iter()
                    .enumerate()
                    .filter_map(|(j, &v)| (j != i).then_some(v)),
            );
            nf * t_n - (nf - 1.0) * u_statistic_unchecked(&rest, kernel)
        })
        .collect();
    Ok(PseudoValueSet {
        t_n,
        values: pseudo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn brute_force_small_examples() {
        let y = [1.0, 2.0, 3.0];
        assert_relative_eq!(u_statistic(&y, &Kernel::variance()).unwrap(), 1.0);
        assert_relative_eq!(u_statistic(&y, &Kernel::pwm()).unwrap(), 4.0 / 3.0);
        assert_eq!(u_statistic(&[2.5; 7], &Kernel::variance()).unwrap(), 0.0);
    }

    #[test]
    fn leave_one_out_examples() {
        let y = [1.0, 2.0, 3.0];
        assert_relative_eq!(leave_one_out(&y, &Kernel::variance(), 0).unwrap(), 0.5);
        assert_relative_eq!(leave_one_out(&y, &Kernel::pwm(), 1).unwrap(), 1.5);
        let g = Kernel::new("sum", 2, |a| a[0] + a[1] + a[0] * a[1]);
        assert_relative_eq!(leave_one_out(&[5.0; 3], &g, 0).unwrap(), 35.0);
    }

    #[test]
    fn pseudo_value_examples() {
        let y = [1.0, 2.0, 3.0];
        let pv = jackknife_pseudo_values(&y, &Kernel::variance()).unwrap();
        assert_relative_eq!(pv.t_n, 1.0, epsilon = 1e-14);
        for (got, want) in pv.values.iter().zip([2.0, -1.0, 2.0]) {
            assert_relative_eq!(*got, want, epsilon = 1e-12);
        }

        let pv = jackknife_pseudo_values(&y, &Kernel::pwm()).unwrap();
        assert_relative_eq!(pv.t_n, 4.0 / 3.0, epsilon = 1e-14);
        for (got, want) in pv.values.iter().zip([1.0, 1.0, 2.0]) {
            assert_relative_eq!(*got, want, epsilon = 1e-12);
        }

        let pv = jackknife_pseudo_values(&[4.0; 6], &Kernel::variance()).unwrap();
        assert!(pv.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn errors() {
        let k = Kernel::variance();
        assert_eq!(
            u_statistic(&[1.0], &k),
            Err(JelError::SampleTooSmall { n: 1, required: 2 })
        );
        assert_eq!(
            u_statistic(&[1.0, f64::NAN], &k),
            Err(JelError::NonFiniteInput { index: 1 })
        );
        assert!(matches!(
            jackknife_pseudo_values(&[1.0, 2.0], &k),
            Err(JelError::SampleTooSmall { .. })
        ));
        assert_eq!(
            leave_one_out(&[1.0, 2.0, 3.0], &k, 3),
            Err(JelError::IndexOutOfRange { index: 3, n: 3 })
        );
        assert!(matches!(
            jackknife_pseudo_values(&[1.0, f64::INFINITY, 2.0], &k),
            Err(JelError::NonFiniteInput { index: 1 })
        ));
        assert!(Kernel::by_name("gini").is_err());
    }

    #[test]
    fn degree_three_uses_naive_path() {
        // Third central moment kernel.
        let k = Kernel::new("skew", 3, |a| {
            let (x, y, z) = (a[0], a[1], a[2]);
            (2.0 * x * x * x + 2.0 * y * y * y + 2.0 * z * z * z
                - 3.0 * (x * x * (y + z) + y * y * (x + z) + z * z * (x + y))
                + 12.0 * x * y * z)
                / 6.0
        });
        let y = [0.3, 1.7, -0.4, 2.2, 0.9];
        let pv = jackknife_pseudo_values(&y, &k).unwrap();
        assert_relative_eq!(pv.mean(), pv.t_n, max_relative = 1e-10);
        let loo = leave_one_out(&y, &k, 2).unwrap();
        assert_relative_eq!(pv.values[2], 5.0 * pv.t_n - 4.0 * loo, epsilon = 1e-12);
    }

    #[test]
    fn kernel_symmetry_of_builtins() {
        for k in [Kernel::variance(), Kernel::pwm()] {
            assert_eq!(k.eval(&[1.3, -0.2]), k.eval(&[-0.2, 1.3]));
        }
    }
}
