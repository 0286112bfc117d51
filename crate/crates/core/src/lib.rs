//! Jackknife pseudo-empirical likelihood inference for U-statistic
//! parameters under unequal-probability survey sampling.
//!
//! The crate is organised bottom-up:
//!
//! * [`ustat`]: U-statistics and jackknife pseudo-values;
//! * [`designs`]: population generation, pi-ps and simple random sampling,
//!   calibration weights and CSV exchange formats;
//! * [`elsolve`]: Lagrange-multiplier solvers of the EL inner problem;
//! * [`inference`]: design effects, GREG, ratio statistics and intervals;
//! * [`simharness`]: Monte Carlo coverage studies, report emission and
//!   analysis of external survey files.

// Checks such as `!(p > 0.0)` are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod designs;
pub mod elsolve;
pub mod error;
pub mod inference;
pub mod quantile;
pub mod simharness;
pub mod ustat;

pub use error::{JelError, Result};
