//! Numerical tolerances shared by every module.
//!
//! All thresholds live here so that tests and reports quote the same values.

/// Relative residual allowed between placed corner distances and prescribed side lengths.
pub const EMBED_REL: f64 = 1e-12;

/// Corner angles of a face must sum to pi within this bound.
pub const ANGLE: f64 = 1e-9;

/// Gauss-Bonnet residual bound, `|sum(2pi - theta_v) - 2pi chi|`.
pub const GAUSS_BONNET: f64 = 1e-9;

/// Computed barycentric entries below this are snapped to zero.
pub const SNAP: f64 = 1e-12;

/// Accepted deviation of a user-supplied barycentric sum from one.
pub const BARY_SUM: f64 = 1e-9;

/// Metric identities (symmetry, triangle inequality, locality) are checked at this bound.
pub const METRIC: f64 = 1e-9;
