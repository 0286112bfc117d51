//! Lagrange multipliers of the weighted empirical-likelihood inner problem.
//!
//! For normalized weights `w_i` and constraint values `u_i`, the multiplier
//! `lambda` solves `sum_i w_i u_i / (1 + lambda' u_i) = 0`, and the EL
//! probabilities are `p_i = w_i / (1 + lambda' u_i)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{JelError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Absolute tolerance on the multiplier equation.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tolerance: 1e-10,
            max_iterations: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ELSolution {
    pub lambda: Vec<f64>,
    pub p: Vec<f64>,
    pub iterations: usize,
    pub residual_norm: f64,
    pub converged: bool,
}

impl ELSolution {
    /// `sum_i w_i log(1 + lambda' u_i)`, i.e. the drop in the weighted
    /// log-likelihood `sum_i w_i log p_i` relative to `p = w`.
    pub fn log_ratio(&self, weights: &[f64]) -> f64 {
        weights
            .iter()
            .zip(&self.p)
            .map(|(w, p)| w * (w / p).ln())
            .sum()
    }
}

fn check_weights(weights: &[f64], n: usize) -> Result<()> {
    if weights.len() != n {
        return Err(JelError::InvalidArgument(format!(
            "{} weights for {} constraint values",
            weights.len(),
            n
        )));
    }
    if n == 0 {
        return Err(JelError::SampleTooSmall { n: 0, required: 1 });
    }
    if let Some(i) = weights.iter().position(|&w| !(w > 0.0 && w.is_finite())) {
        return Err(JelError::InvalidArgument(format!(
            "weight {} at position {i} is not positive",
            weights[i]
        )));
    }
    Ok(())
}

/// EL probabilities for a given multiplier.
pub fn el_weights<U: AsRef<[f64]>>(weights: &[f64], lambda: &[f64], u: &[U]) -> Result<Vec<f64>> {
    check_weights(weights, u.len())?;
    weights
        .iter()
        .zip(u)
        .enumerate()
        .map(|(index, (w, ui))| {
            let ui = ui.as_ref();
            if ui.len() != lambda.len() {
                return Err(JelError::InvalidArgument(format!(
                    "constraint dimension {} does not match multiplier dimension {}",
                    ui.len(),
                    lambda.len()
                )));
            }
            let denom = 1.0 + dot(lambda, ui);
            if denom > 0.0 {
                Ok(w / denom)
            } else {
                Err(JelError::BoundaryViolation { index })
            }
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Scalar multiplier by safeguarded Newton iteration.
///
/// `g(lambda) = sum w_i u_i / (1 + lambda u_i)` is strictly decreasing on
/// `(-1/max u, -1/min u)`, so the root is kept bracketed and any Newton step
/// leaving the bracket is replaced by bisection.
pub fn solve_lambda_scalar(weights: &[f64], u: &[f64]) -> Result<ELSolution> {
    solve_lambda_scalar_with(weights, u, SolverOptions::default())
}

pub fn solve_lambda_scalar_with(
    weights: &[f64],
    u: &[f64],
    opts: SolverOptions,
) -> Result<ELSolution> {
    check_weights(weights, u.len())?;
    if let Some(index) = u.iter().position(|v| !v.is_finite()) {
        return Err(JelError::NonFiniteInput { index });
    }
    let (umin, umax) = u
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    if !(umin < 0.0 && umax > 0.0) {
        return Err(JelError::InfeasibleConstraint);
    }

    let eval = |lambda: f64| -> (f64, f64) {
        let mut g = 0.0;
        let mut dg = 0.0;
        for (w, v) in weights.iter().zip(u) {
            let t = v / (1.0 + lambda * v);
            g += w * t;
            dg -= w * t * t;
        }
        (g, dg)
    };

    let width = -1.0 / umin + 1.0 / umax;
    let eps = 1e-12 * width;
    let mut lo = -1.0 / umax + eps;
    let mut hi = -1.0 / umin - eps;
    let mut lambda = 0.0;
    let (mut g, mut dg) = eval(lambda);
    let mut iterations = 0;
    let scale = umax.max(-umin).max(1.0);

    while g.abs() > opts.tolerance {
        if iterations >= opts.max_iterations {
            return Err(JelError::NonConvergence {
                what: "scalar multiplier solver",
                iterations,
            });
        }
        iterations += 1;
        if g > 0.0 {
            lo = lambda;
        } else {
            hi = lambda;
        }
        let newton = lambda - g / dg;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == lambda || hi - lo <= 4.0 * f64::EPSILON * lambda.abs().max(f64::MIN_POSITIVE) {
            // Bracket exhausted at machine precision.
            break;
        }
        lambda = next;
        (g, dg) = eval(lambda);
    }

    // One more Newton step takes the root to machine precision; kept only
    // if it stays bracketed and does not worsen the residual.
    if g != 0.0 {
        let polished = lambda - g / dg;
        if polished > lo && polished < hi {
            let (gp, _) = eval(polished);
            if gp.abs() <= g.abs() {
                lambda = polished;
                g = gp;
            }
        }
    }

    let converged = g.abs() <= opts.tolerance || g.abs() <= 1e3 * f64::EPSILON * scale;
    if !converged {
        return Err(JelError::NonConvergence {
            what: "scalar multiplier solver",
            iterations,
        });
    }
    let p = weights
        .iter()
        .zip(u)
        .map(|(w, v)| w / (1.0 + lambda * v))
        .collect();
    Ok(ELSolution {
        lambda: vec![lambda],
        p,
        iterations,
        residual_norm: g.abs(),
        converged,
    })
}

/// Whether the origin is an interior point of the convex hull of planar points.
fn origin_interior_2d<U: AsRef<[f64]>>(u: &[U]) -> bool {
    let mut angles: Vec<f64> = u
        .iter()
        .map(|p| p.as_ref())
        .filter(|p| p[0] != 0.0 || p[1] != 0.0)
        .map(|p| p[1].atan2(p[0]))
        .collect();
    if angles.len() < 3 {
        return false;
    }
    angles.sort_by(f64::total_cmp);
    let wrap = angles[0] + std::f64::consts::TAU - angles[angles.len() - 1];
    let max_gap = angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
    max_gap < std::f64::consts::PI
}

/// Vector multiplier by damped Newton ascent on the concave dual
/// `F(lambda) = sum w_i log(1 + lambda' u_i)`, halving steps until every
/// denominator stays positive and `F` does not decrease.
pub fn solve_lambda_vector<U: AsRef<[f64]>>(weights: &[f64], u: &[U]) -> Result<ELSolution> {
    solve_lambda_vector_with(weights, u, SolverOptions::default())
}

pub fn solve_lambda_vector_with<U: AsRef<[f64]>>(
    weights: &[f64],
    u: &[U],
    opts: SolverOptions,
) -> Result<ELSolution> {
    let n = u.len();
    check_weights(weights, n)?;
    let k = u[0].as_ref().len();
    if k == 0 || u.iter().any(|ui| ui.as_ref().len() != k) {
        return Err(JelError::InvalidArgument(
            "constraint vectors must share a positive dimension".into(),
        ));
    }
    if k >= n {
        return Err(JelError::SampleTooSmall { n, required: k + 1 });
    }
    if let Some(index) = u
        .iter()
        .position(|ui| ui.as_ref().iter().any(|v| !v.is_finite()))
    {
        return Err(JelError::NonFiniteInput { index });
    }

    let mut outer = DMatrix::<f64>::zeros(k, k);
    for (w, ui) in weights.iter().zip(u) {
        let v = DVector::from_column_slice(ui.as_ref());
        outer += *w * &v * v.transpose();
    }
    if outer.clone().cholesky().is_none()
        || outer.rank(1e-12 * outer.norm().max(f64::MIN_POSITIVE)) < k
    {
        return Err(JelError::SingularJacobian);
    }

    match k {
        1 => {
            let flat: Vec<f64> = u.iter().map(|ui| ui.as_ref()[0]).collect();
            let (lo, hi) = flat
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                    (a.min(v), b.max(v))
                });
            if !(lo < 0.0 && hi > 0.0) {
                return Err(JelError::InfeasibleConstraint);
            }
        }
        2 if !origin_interior_2d(u) => return Err(JelError::InfeasibleConstraint),
        _ => {}
    }

    let scale = u
        .iter()
        .flat_map(|ui| ui.as_ref().iter())
        .fold(1.0_f64, |m, v| m.max(v.abs()));

    // Returns (F, gradient, Jacobian of the gradient with sign flipped) or
    // None when a denominator is not positive.
    let eval = |lambda: &DVector<f64>| -> Option<(f64, DVector<f64>, DMatrix<f64>)> {
        let mut f = 0.0;
        let mut grad = DVector::<f64>::zeros(k);
        let mut hess = DMatrix::<f64>::zeros(k, k);
        for (w, ui) in weights.iter().zip(u) {
            let ui = ui.as_ref();
            let denom = 1.0 + dot(lambda.as_slice(), ui);
            if !(denom > 0.0) {
                return None;
            }
            f += w * denom.ln();
            let v = DVector::from_column_slice(ui);
            grad.axpy(w / denom, &v, 1.0);
            hess += (w / (denom * denom)) * &v * v.transpose();
        }
        Some((f, grad, hess))
    };

    let mut lambda = DVector::<f64>::zeros(k);
    let (mut f, mut grad, mut hess) = eval(&lambda).expect("denominators are 1 at lambda = 0");
    let mut iterations = 0;
    // Sum of p is 1 - lambda'g, so both terms must vanish; near an
    // unbounded direction the gradient decays while lambda'g tends to 1.
    let unconverged = |lambda: &DVector<f64>, grad: &DVector<f64>| {
        grad.amax() > opts.tolerance || lambda.dot(grad).abs() > opts.tolerance
    };
    while unconverged(&lambda, &grad) {
        if iterations >= opts.max_iterations {
            return Err(classify_failure(&lambda, scale, iterations));
        }
        iterations += 1;
        let step = match hess.clone().cholesky() {
            Some(ch) => ch.solve(&grad),
            None => hess
                .clone()
                .lu()
                .solve(&grad)
                .ok_or(JelError::SingularJacobian)?,
        };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial = &lambda + t * &step;
            if let Some((ft, gt, ht)) = eval(&trial) {
                if ft >= f - 1e-14 * f.abs().max(1.0) {
                    lambda = trial;
                    f = ft;
                    grad = gt;
                    hess = ht;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            if grad.amax() <= 1e3 * f64::EPSILON * scale {
                break;
            }
            return Err(classify_failure(&lambda, scale, iterations));
        }
    }

    // Final full Newton step, as in the scalar solver.
    if grad.amax() > 0.0 {
        if let Some(step) = hess.clone().cholesky().map(|ch| ch.solve(&grad)) {
            let trial = &lambda + step;
            if let Some((_, gt, _)) = eval(&trial) {
                if gt.amax() <= grad.amax() {
                    lambda = trial;
                    grad = gt;
                }
            }
        }
    }

    let residual = grad.amax();
    let lambda: Vec<f64> = lambda.iter().copied().collect();
    let p = el_weights(weights, &lambda, u)?;
    Ok(ELSolution {
        lambda,
        p,
        iterations,
        residual_norm: residual,
        converged: true,
    })
}

fn classify_failure(lambda: &DVector<f64>, scale: f64, iterations: usize) -> JelError {
    if lambda.amax() * scale > 1e8 {
        JelError::InfeasibleConstraint
    } else {
        JelError::NonConvergence {
            what: "vector multiplier solver",
            iterations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn scalar_trivial_root() {
        let w = [0.25, 0.25, 0.5];
        let u = [-1.0, -1.0, 1.0];
        let sol = solve_lambda_scalar(&w, &u).unwrap();
        assert_eq!(sol.lambda, vec![0.0]);
        assert_eq!(sol.p, w.to_vec());
        assert_eq!(sol.iterations, 0);
    }

    #[test]
    fn scalar_two_point_closed_form() {
        let sol = solve_lambda_scalar(&[0.5, 0.5], &[-1.0, 3.0]).unwrap();
        assert_relative_eq!(sol.lambda[0], 1.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(sol.p[0], 0.75, epsilon = 1e-12);
        assert_relative_eq!(sol.p[1], 0.25, epsilon = 1e-12);
        assert!(sol.converged && sol.residual_norm <= 1e-10);
    }

    #[test]
    fn scalar_infeasible() {
        assert_eq!(
            solve_lambda_scalar(&[0.5, 0.5], &[1.0, 2.0]),
            Err(JelError::InfeasibleConstraint)
        );
        assert_eq!(
            solve_lambda_scalar(&[0.5, 0.5], &[0.0, 2.0]),
            Err(JelError::InfeasibleConstraint)
        );
    }

    #[test]
    fn scalar_near_hull_boundary() {
        // Root sits extremely close to -1/max(u).
        let w = [0.999_999, 0.000_001];
        let u = [1.0, -1e-6];
        let sol = solve_lambda_scalar(&w, &u).unwrap();
        let g: f64 = w
            .iter()
            .zip(&u)
            .map(|(a, b)| a * b / (1.0 + sol.lambda[0] * b))
            .sum();
        assert!(g.abs() <= 1e-10);
        assert!(1.0 + sol.lambda[0] * u[0] > 0.0);
    }

    #[test]
    fn el_weight_cases() {
        let u = [[-1.0], [3.0]];
        assert_eq!(el_weights(&[0.5, 0.5], &[0.0], &u).unwrap(), vec![0.5, 0.5]);
        let p = el_weights(&[0.5, 0.5], &[1.0 / 3.0], &u).unwrap();
        assert_relative_eq!(p[0], 0.75, epsilon = 1e-15);
        assert_relative_eq!(p[1], 0.25, epsilon = 1e-15);
        assert_eq!(
            el_weights(&[0.5, 0.5], &[1.0], &u),
            Err(JelError::BoundaryViolation { index: 0 })
        );
    }

    #[test]
    fn vector_trivial_and_half_space() {
        let w = [0.25; 4];
        let u = [[1.0, 0.0], [-1.0, 0.0], [0.0, 2.0], [0.0, -2.0]];
        let sol = solve_lambda_vector(&w, &u).unwrap();
        assert_eq!(sol.lambda, vec![0.0, 0.0]);

        let u = [[1.0, 0.5], [2.0, -0.5], [0.5, 3.0], [0.1, -1.0]];
        assert_eq!(
            solve_lambda_vector(&w, &u),
            Err(JelError::InfeasibleConstraint)
        );

        // Three dimensions: infeasibility detected from divergence.
        let u3 = [
            [1.0, 0.0, 0.0],
            [0.5, 1.0, 0.0],
            [0.5, -1.0, 1.0],
            [0.3, 0.0, -1.0],
            [2.0, 1.0, 1.0],
        ];
        let w5 = [0.2; 5];
        assert!(matches!(
            solve_lambda_vector(&w5, &u3),
            Err(JelError::InfeasibleConstraint) | Err(JelError::NonConvergence { .. })
        ));
    }

    #[test]
    fn vector_singular() {
        let w = [0.25; 4];
        let u = [[1.0, 2.0], [-1.0, -2.0], [0.5, 1.0], [-0.5, -1.0]];
        assert_eq!(solve_lambda_vector(&w, &u), Err(JelError::SingularJacobian));
    }

    #[test]
    fn vector_solution_satisfies_constraints() {
        let w = [0.1, 0.2, 0.3, 0.15, 0.25];
        let u = [
            [1.0, -0.5],
            [-0.8, 0.3],
            [0.2, 0.9],
            [-0.4, -1.1],
            [0.6, 0.2],
        ];
        let sol = solve_lambda_vector(&w, &u).unwrap();
        assert_relative_eq!(sol.p.iter().sum::<f64>(), 1.0, epsilon = 1e-10);
        for c in 0..2 {
            let s: f64 = sol.p.iter().zip(&u).map(|(p, ui)| p * ui[c]).sum();
            assert!(s.abs() <= 1e-10);
        }
    }

    #[test]
    fn log_ratio_is_nonnegative() {
        let w = [0.5, 0.5];
        let sol = solve_lambda_scalar(&w, &[-1.0, 3.0]).unwrap();
        let expected = 0.5 * (0.5f64 / 0.75).ln() + 0.5 * (0.5f64 / 0.25).ln();
        assert_relative_eq!(sol.log_ratio(&w), expected, epsilon = 1e-14);
        assert!(sol.log_ratio(&w) > 0.0);
    }
}
