//! Point estimates, design effects and confidence intervals built on the
//! jackknife pseudo-values of a survey sample.
//!
//! Three pseudo-empirical likelihood ratio statistics are supported:
//!
//! * [`Method::Jel`]: design weights, mean constraint only, log-likelihood
//!   scaled by the effective sample size `n / deff_H`;
//! * [`Method::JelD`]: design weights with the extra calibration constraint
//!   `sum p_i x_i = X_bar`, scaled by `n / deff_GR`;
//! * [`Method::JelW`]: calibration weights, mean constraint only, scaled by
//!   `m = S_V^2 / V_p(V_GR)`.
//!
//! [`Method::Na`] is the usual normal-approximation interval.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::designs::{SurveySample, WeightMode};
use crate::elsolve::{solve_lambda_scalar_with, solve_lambda_vector_with, SolverOptions};
use crate::error::{JelError, Result};
use crate::quantile::{chi_squared_quantile, normal_quantile};
use crate::ustat::PseudoValueSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Na,
    Jel,
    JelD,
    JelW,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Na, Method::Jel, Method::JelD, Method::JelW];

    pub fn tag(self) -> &'static str {
        match self {
            Method::Na => "NA",
            Method::Jel => "JEL",
            Method::JelD => "JEL_d",
            Method::JelW => "JEL_w",
        }
    }

    /// Weights the method's estimator is built on.
    pub fn weight_mode(self) -> WeightMode {
        match self {
            Method::JelW => WeightMode::Calibration,
            _ => WeightMode::Design,
        }
    }

    /// Whether the population mean of `x` is required (JEL_w uses it when
    /// available but can do without).
    pub fn needs_auxiliary(self) -> bool {
        matches!(self, Method::JelD)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = JelError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "na" => Ok(Method::Na),
            "jel" => Ok(Method::Jel),
            "jel_d" | "jeld" => Ok(Method::JelD),
            "jel_w" | "jelw" => Ok(Method::JelW),
            _ => Err(JelError::InvalidArgument(format!("unknown method {s:?}"))),
        }
    }
}

/// Which estimator a design effect refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeffMode {
    /// Hajek estimator of the pseudo-value mean.
    Hajek,
    /// Regression (GREG) estimator using the auxiliary mean.
    Greg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignSummary {
    /// Hajek or GREG point estimate.
    pub point: f64,
    /// Estimated design variance of `point`.
    pub v_p_hat: f64,
    /// Hajek-type estimate of `S_V^2` (Hajek mode) or `S_r^2` (GREG mode).
    pub s2_hat: f64,
    pub deff: f64,
    pub n_eff: f64,
    /// Log-likelihood scale for calibration weighting, `S_V^2 / V_p(V_GR)`.
    /// In Hajek mode this equals `n_eff`.
    pub m_scale: f64,
    /// Regression coefficients (empty in Hajek mode).
    pub b: Vec<f64>,
    /// `r_i = V_i - V_bar - B'(x_i - X_bar)` (empty in Hajek mode).
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IntervalDiagnostics {
    pub solver_iterations: usize,
    pub ratio_evaluations: usize,
    pub bracket_expansions: usize,
    /// All pseudo-values coincide; the interval has zero width.
    pub degenerate: bool,
    /// An endpoint was pinned next to the boundary of the feasible region.
    pub hull_clamped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub method: Method,
    pub point: f64,
    pub diagnostics: IntervalDiagnostics,
}

impl ConfidenceInterval {
    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.lower <= theta && theta <= self.upper
    }
}

fn check_pv(sample: &SurveySample, pv: &PseudoValueSet) -> Result<()> {
    if sample.n() != pv.n() {
        return Err(JelError::InvalidArgument(format!(
            "sample has {} units but {} pseudo-values were supplied",
            sample.n(),
            pv.n()
        )));
    }
    Ok(())
}

fn weighted_mean(weights: &[f64], values: &[f64]) -> f64 {
    weights.iter().zip(values).map(|(w, v)| w * v).sum()
}

fn weighted_spread(weights: &[f64], values: &[f64]) -> f64 {
    let m = weighted_mean(weights, values);
    weights
        .iter()
        .zip(values)
        .map(|(w, v)| w * (v - m) * (v - m))
        .sum()
}

/// `sum_i w~_i V_i` with the requested normalized weights.
pub fn hajek_estimate(sample: &SurveySample, pv: &PseudoValueSet, mode: WeightMode) -> Result<f64> {
    check_pv(sample, pv)?;
    let w = sample.normalized_weights(mode)?;
    Ok(weighted_mean(&w, &pv.values))
}

/// With-replacement style variance of a Hajek-form mean:
/// `n/(n-1) * sum_i w~_i^2 (v_i - sum_j w~_j v_j)^2`.
pub fn variance_estimate(sample: &SurveySample, values: &[f64], mode: WeightMode) -> Result<f64> {
    let w = sample.normalized_weights(mode)?;
    weighted_variance_estimate(&w, values)
}

pub(crate) fn weighted_variance_estimate(w: &[f64], values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(JelError::SampleTooSmall { n, required: 2 });
    }
    if w.len() != n {
        return Err(JelError::InvalidArgument(format!(
            "{} weights for {} values",
            w.len(),
            n
        )));
    }
    let m = weighted_mean(w, values);
    let s: f64 = w
        .iter()
        .zip(values)
        .map(|(wi, v)| wi * wi * (v - m) * (v - m))
        .sum();
    Ok(n as f64 / (n as f64 - 1.0) * s)
}

/// Weighted least-squares slope(s) of `v` on `x`:
/// `B = {sum w (x - c)(x - c)'}^{-1} sum w (x - c)(v - v_c)`.
///
/// With `w_i = 1/N` over a whole population and `c`, `v_c` the population
/// means this is the population regression coefficient.
pub fn regression_coefficients<X: AsRef<[f64]>>(
    x: &[X],
    v: &[f64],
    weights: &[f64],
    x_center: &[f64],
    v_center: f64,
) -> Result<Vec<f64>> {
    let k = x_center.len();
    if x.len() != v.len() || x.len() != weights.len() {
        return Err(JelError::InvalidArgument(
            "regression inputs have different lengths".into(),
        ));
    }
    let mut sxx = DMatrix::<f64>::zeros(k, k);
    let mut sxv = DVector::<f64>::zeros(k);
    for ((xi, &vi), &wi) in x.iter().zip(v).zip(weights) {
        let xi = xi.as_ref();
        if xi.len() != k {
            return Err(JelError::InvalidArgument(
                "auxiliary vectors have inconsistent dimension".into(),
            ));
        }
        let c = DVector::from_iterator(k, xi.iter().zip(x_center).map(|(a, b)| a - b));
        sxx += wi * &c * c.transpose();
        sxv.axpy(wi * (vi - v_center), &c, 1.0);
    }
    let scale = sxx.amax();
    if !(scale > 0.0) {
        return Err(JelError::DegenerateAuxiliary);
    }
    let chol = sxx.cholesky().ok_or(JelError::DegenerateAuxiliary)?;
    Ok(chol.solve(&sxv).iter().copied().collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GregFit {
    pub estimate: f64,
    pub b: Vec<f64>,
    pub residuals: Vec<f64>,
}

/// GREG estimate `V_H + B (X_bar - X_H)` with `B` from the design-weighted
/// sample regression of the pseudo-values on `x`.
pub fn greg_estimate(sample: &SurveySample, pv: &PseudoValueSet, x_bar: f64) -> Result<GregFit> {
    check_pv(sample, pv)?;
    let d = sample.normalized_weights(WeightMode::Design)?;
    let v_h = weighted_mean(&d, &pv.values);
    let x_h = weighted_mean(&d, &sample.x);
    let rows: Vec<[f64; 1]> = sample.x.iter().map(|&x| [x]).collect();
    let b = regression_coefficients(&rows, &pv.values, &d, &[x_h], v_h)?;
    let v_bar = pv.mean();
    let residuals = pv
        .values
        .iter()
        .zip(&sample.x)
        .map(|(v, x)| v - v_bar - b[0] * (x - x_bar))
        .collect();
    Ok(GregFit {
        estimate: v_h + b[0] * (x_bar - x_h),
        b,
        residuals,
    })
}

/// Design effect and effective sample size of the Hajek or GREG estimator.
pub fn design_effect(
    sample: &SurveySample,
    pv: &PseudoValueSet,
    mode: DeffMode,
    weights: WeightMode,
    x_bar: Option<f64>,
) -> Result<DesignSummary> {
    design_effect_with(sample, pv, mode, weights, x_bar, None)
}

/// As [`design_effect`], optionally replacing the estimated design variance
/// by a known value (e.g. a Monte Carlo variance across replicates).
pub fn design_effect_with(
    sample: &SurveySample,
    pv: &PseudoValueSet,
    mode: DeffMode,
    weights: WeightMode,
    x_bar: Option<f64>,
    v_p_override: Option<f64>,
) -> Result<DesignSummary> {
    check_pv(sample, pv)?;
    let n = sample.n() as f64;
    let w = sample.normalized_weights(weights)?;
    let sv2 = weighted_spread(&w, &pv.values);
    let vmax = pv.max_abs().max(1.0);
    if sv2 <= (1e3 * f64::EPSILON * vmax).powi(2) {
        return Err(JelError::DegenerateSample(
            "pseudo-values have no spread".into(),
        ));
    }
    match mode {
        DeffMode::Hajek => {
            let point = weighted_mean(&w, &pv.values);
            let v_p = match v_p_override {
                Some(v) => v,
                None => weighted_variance_estimate(&w, &pv.values)?,
            };
            if !(v_p > 0.0) {
                return Err(JelError::DegenerateSample(
                    "estimated design variance is zero".into(),
                ));
            }
            let deff = v_p / (sv2 / n);
            Ok(DesignSummary {
                point,
                v_p_hat: v_p,
                s2_hat: sv2,
                deff,
                n_eff: n / deff,
                m_scale: n / deff,
                b: Vec::new(),
                residuals: Vec::new(),
            })
        }
        DeffMode::Greg => {
            let x_bar = x_bar.ok_or(JelError::InvalidArgument(
                "GREG design effect needs the population mean of x".into(),
            ))?;
            let fit = greg_estimate(sample, pv, x_bar)?;
            let point = match weights {
                WeightMode::Design => fit.estimate,
                WeightMode::Calibration => weighted_mean(&w, &pv.values),
            };
            let sr2 = weighted_spread(&w, &fit.residuals);
            if sr2 <= (1e3 * f64::EPSILON * vmax).powi(2) {
                return Err(JelError::DegenerateSample(
                    "regression residuals have no spread".into(),
                ));
            }
            let v_p = match v_p_override {
                Some(v) => v,
                None => weighted_variance_estimate(&w, &fit.residuals)?,
            };
            if !(v_p > 0.0) {
                return Err(JelError::DegenerateSample(
                    "estimated design variance is zero".into(),
                ));
            }
            let deff = v_p / (sr2 / n);
            Ok(DesignSummary {
                point,
                v_p_hat: v_p,
                s2_hat: sr2,
                deff,
                n_eff: n / deff,
                m_scale: sv2 / v_p,
                b: fit.b,
                residuals: fit.residuals,
            })
        }
    }
}

/// Value of a profile ratio statistic at one `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioEval {
    /// `+inf` when `theta` lies outside the feasible region.
    pub value: f64,
    pub feasible: bool,
    pub lambda: Vec<f64>,
    pub iterations: usize,
}

impl RatioEval {
    fn infeasible() -> Self {
        RatioEval {
            value: f64::INFINITY,
            feasible: false,
            lambda: Vec::new(),
            iterations: 0,
        }
    }
}

/// A prepared profile-likelihood problem for one sample and method.
#[derive(Debug, Clone)]
pub struct JelProblem {
    method: Method,
    weights: Vec<f64>,
    v: Vec<f64>,
    aux: Vec<f64>,
    scale: f64,
    baseline: f64,
    point: f64,
    hull: (f64, f64),
    summary: DesignSummary,
    opts: SolverOptions,
}

impl JelProblem {
    pub fn new(
        sample: &SurveySample,
        pv: &PseudoValueSet,
        method: Method,
        x_bar: Option<f64>,
    ) -> Result<Self> {
        Self::with_options(sample, pv, method, x_bar, None, SolverOptions::default())
    }

    /// `v_p_override` replaces the estimated design variance entering the
    /// effective sample size (or `m`) when it is known from elsewhere.
    pub fn with_options(
        sample: &SurveySample,
        pv: &PseudoValueSet,
        method: Method,
        x_bar: Option<f64>,
        v_p_override: Option<f64>,
        opts: SolverOptions,
    ) -> Result<Self> {
        check_pv(sample, pv)?;
        let (deff_mode, weight_mode) = match method {
            Method::Na => {
                return Err(JelError::InvalidArgument(
                    "the normal-approximation interval has no likelihood ratio".into(),
                ))
            }
            Method::Jel => (DeffMode::Hajek, WeightMode::Design),
            Method::JelD => (DeffMode::Greg, WeightMode::Design),
            // Without the auxiliary mean, m falls back to S_V^2 / V_p(sum w~ V).
            Method::JelW if x_bar.is_none() => (DeffMode::Hajek, WeightMode::Calibration),
            Method::JelW => (DeffMode::Greg, WeightMode::Calibration),
        };
        let weights = sample.normalized_weights(weight_mode)?;
        let summary = design_effect_with(sample, pv, deff_mode, weight_mode, x_bar, v_p_override)?;
        let v = pv.values.clone();
        let vmin = v.iter().copied().fold(f64::INFINITY, f64::min);
        let vmax = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);

        match method {
            Method::JelD => {
                let x_bar = x_bar.expect("checked by design_effect");
                let aux: Vec<f64> = sample.x.iter().map(|x| x - x_bar).collect();
                let base = solve_lambda_scalar_with(&weights, &aux, opts)?;
                let baseline = base.log_ratio(&weights);
                let point = weighted_mean(&base.p, &v) / base.p.iter().sum::<f64>();
                let hull = line_section_of_hull(&sample.x, &v, x_bar)
                    .ok_or(JelError::InfeasibleConstraint)?;
                Ok(JelProblem {
                    method,
                    weights,
                    v,
                    aux,
                    scale: summary.n_eff,
                    baseline,
                    point,
                    hull,
                    summary,
                    opts,
                })
            }
            _ => {
                let scale = match method {
                    Method::Jel => summary.n_eff,
                    _ => summary.m_scale,
                };
                let point = weighted_mean(&weights, &v);
                Ok(JelProblem {
                    method,
                    weights,
                    v,
                    aux: Vec::new(),
                    scale,
                    baseline: 0.0,
                    point,
                    hull: (vmin, vmax),
                    summary,
                    opts,
                })
            }
        }
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Maximizer of the profile likelihood, where the ratio is zero.
    pub fn point(&self) -> f64 {
        self.point
    }

    /// Open interval of `theta` values for which the ratio is finite.
    pub fn hull(&self) -> (f64, f64) {
        self.hull
    }

    /// Factor multiplying the weighted log-likelihood (`n*` or `m`).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn summary(&self) -> &DesignSummary {
        &self.summary
    }

    /// `-2 { l(p(theta)) - l(p_hat) }` for this problem's method.
    pub fn ratio(&self, theta: f64) -> Result<RatioEval> {
        if !(theta > self.hull.0 && theta < self.hull.1) {
            return Ok(RatioEval::infeasible());
        }
        let solved = match self.method {
            Method::JelD => {
                let u: Vec<[f64; 2]> = self
                    .v
                    .iter()
                    .zip(&self.aux)
                    .map(|(v, a)| [v - theta, *a])
                    .collect();
                solve_lambda_vector_with(&self.weights, &u, self.opts)
            }
            _ => {
                let u: Vec<f64> = self.v.iter().map(|v| v - theta).collect();
                solve_lambda_scalar_with(&self.weights, &u, self.opts)
            }
        };
        match solved {
            Ok(sol) => Ok(RatioEval {
                value: 2.0 * self.scale * (sol.log_ratio(&self.weights) - self.baseline),
                feasible: true,
                lambda: sol.lambda,
                iterations: sol.iterations,
            }),
            Err(JelError::InfeasibleConstraint) => Ok(RatioEval::infeasible()),
            Err(e) => Err(e),
        }
    }

    /// `{theta : ratio(theta) <= chi2_1 quantile(level)}`.
    ///
    /// Brackets are expanded geometrically from the point estimate until
    /// the ratio exceeds the quantile or the feasible boundary is reached;
    /// each endpoint is then bisected to `|r - q| <= 1e-8` or a bracket
    /// width of `1e-10` times the problem scale.
    pub fn profile_interval(&self, level: f64) -> Result<ConfidenceInterval> {
        let q = chi_squared_quantile(level, 1.0)?;
        let mut diag = IntervalDiagnostics::default();
        let (lo_hull, hi_hull) = self.hull;
        let range = hi_hull - lo_hull;
        let theta_scale = self.point.abs().max(range).max(f64::MIN_POSITIVE);
        let width_tol = 1e-10 * theta_scale;
        let step0 = {
            let se = (self.summary.v_p_hat).sqrt();
            if se.is_finite() && se > 0.0 {
                0.5 * se
            } else {
                1e-3 * range
            }
        };

        let endpoint = |dir: f64, diag: &mut IntervalDiagnostics| -> Result<f64> {
            let boundary = if dir > 0.0 { hi_hull } else { lo_hull };
            let mut inner = self.point;
            let mut step = step0;
            let outer = loop {
                let mut theta = self.point + dir * step;
                if (theta - boundary) * dir >= 0.0 {
                    theta = boundary;
                }
                let r = self.ratio(theta)?;
                diag.ratio_evaluations += 1;
                diag.solver_iterations += r.iterations;
                if r.value > q {
                    break theta;
                }
                inner = theta;
                step *= 2.0;
                diag.bracket_expansions += 1;
                if diag.bracket_expansions > 2000 {
                    return Err(JelError::NonConvergence {
                        what: "interval bracketing",
                        iterations: diag.bracket_expansions,
                    });
                }
            };
            let mut outer = outer;
            for _ in 0..400 {
                let mid = 0.5 * (inner + outer);
                let r = self.ratio(mid)?;
                diag.ratio_evaluations += 1;
                diag.solver_iterations += r.iterations;
                if r.feasible && (r.value - q).abs() <= 1e-8 {
                    return Ok(mid);
                }
                if r.value > q {
                    outer = mid;
                } else {
                    inner = mid;
                }
                if (outer - inner).abs() <= width_tol {
                    if (outer - boundary).abs() <= width_tol {
                        diag.hull_clamped = true;
                    }
                    return Ok(inner);
                }
            }
            Err(JelError::NonConvergence {
                what: "interval endpoint bisection",
                iterations: 400,
            })
        };

        let lower = endpoint(-1.0, &mut diag)?;
        let upper = endpoint(1.0, &mut diag)?;
        Ok(ConfidenceInterval {
            lower,
            upper,
            level,
            method: self.method,
            point: self.point,
            diagnostics: diag,
        })
    }
}

/// Section of the convex hull of the points `(x_i, v_i)` cut by the line
/// `x = x_bar`, as an open interval of `v`; `None` if the line misses the
/// hull's interior.
fn line_section_of_hull(x: &[f64], v: &[f64], x_bar: f64) -> Option<(f64, f64)> {
    let xmin = x.iter().copied().fold(f64::INFINITY, f64::min);
    let xmax = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(xmin < x_bar && x_bar < xmax) {
        return None;
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..x.len() {
        if x[i] == x_bar {
            lo = lo.min(v[i]);
            hi = hi.max(v[i]);
            continue;
        }
        if x[i] > x_bar {
            continue;
        }
        for j in 0..x.len() {
            if x[j] <= x_bar {
                continue;
            }
            let t = (x_bar - x[i]) / (x[j] - x[i]);
            let at = v[i] + t * (v[j] - v[i]);
            lo = lo.min(at);
            hi = hi.max(at);
        }
    }
    (lo < hi).then_some((lo, hi))
}

/// Ratio statistic of `method` at `theta`; `+inf` outside the feasible region.
pub fn jel_ratio(
    theta: f64,
    sample: &SurveySample,
    pv: &PseudoValueSet,
    method: Method,
    x_bar: Option<f64>,
) -> Result<f64> {
    Ok(JelProblem::new(sample, pv, method, x_bar)?
        .ratio(theta)?
        .value)
}

fn degenerate_interval(
    pv: &PseudoValueSet,
    method: Method,
    level: f64,
) -> Option<ConfidenceInterval> {
    let c = pv.values.first().copied()?;
    let tol = 1e-12 * pv.max_abs().max(1.0);
    pv.values
        .iter()
        .all(|v| (v - c).abs() <= tol)
        .then(|| ConfidenceInterval {
            lower: pv.t_n,
            upper: pv.t_n,
            level,
            method,
            point: pv.t_n,
            diagnostics: IntervalDiagnostics {
                degenerate: true,
                ..Default::default()
            },
        })
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(JelError::InvalidArgument(format!(
            "confidence level must lie in (0, 1), got {level}"
        )))
    }
}

/// Profile pseudo-empirical likelihood interval for the given method.
pub fn profile_ci(
    sample: &SurveySample,
    pv: &PseudoValueSet,
    method: Method,
    level: f64,
    x_bar: Option<f64>,
) -> Result<ConfidenceInterval> {
    profile_ci_with(sample, pv, method, level, x_bar, None)
}

/// As [`profile_ci`] with a known design variance (see [`JelProblem::with_options`]).
pub fn profile_ci_with(
    sample: &SurveySample,
    pv: &PseudoValueSet,
    method: Method,
    level: f64,
    x_bar: Option<f64>,
    v_p_override: Option<f64>,
) -> Result<ConfidenceInterval> {
    check_level(level)?;
    check_pv(sample, pv)?;
    if let Some(ci) = degenerate_interval(pv, method, level) {
        return Ok(ci);
    }
    JelProblem::with_options(
        sample,
        pv,
        method,
        x_bar,
        v_p_override,
        SolverOptions::default(),
    )?
    .profile_interval(level)
}

/// `point +- z * sqrt(v)` with the Hajek point and its variance estimate.
pub fn normal_ci(
    sample: &SurveySample,
    pv: &PseudoValueSet,
    level: f64,
    mode: WeightMode,
) -> Result<ConfidenceInterval> {
    normal_ci_with(sample, pv, level, mode, None)
}

pub fn normal_ci_with(
    sample: &SurveySample,
    pv: &PseudoValueSet,
    level: f64,
    mode: WeightMode,
    v_override: Option<f64>,
) -> Result<ConfidenceInterval> {
    check_level(level)?;
    check_pv(sample, pv)?;
    let w = sample.normalized_weights(mode)?;
    let point = weighted_mean(&w, &pv.values);
    let v = match v_override {
        Some(v) => v,
        None => weighted_variance_estimate(&w, &pv.values)?,
    };
    let half = normal_quantile(0.5 + level / 2.0)? * v.max(0.0).sqrt();
    Ok(ConfidenceInterval {
        lower: point - half,
        upper: point + half,
        level,
        method: Method::Na,
        point,
        diagnostics: IntervalDiagnostics::default(),
    })
}
