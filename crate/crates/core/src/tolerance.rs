//! Numerical thresholds shared by every module.
//!
//! All computations are double-precision dense algebra on at most 4096
//! amplitudes, so accumulated rounding stays many orders of magnitude below
//! these values.

/// Normalization, unitarity and Hermiticity checks.
pub const EPS_NORM: f64 = 1e-9;

/// Eigenvalues below this are treated as exact zeros before taking `ln`.
pub const EPS_EIG: f64 = 1e-12;

/// Agreement of invariants computed along two different routes.
pub const EPS_INV: f64 = 1e-8;

/// Zero/nonzero decisions in SLOCC classification and support detection.
pub const EPS_CLASS: f64 = 1e-7;

/// Default threshold on suitability-condition residuals.
pub const EPS_COND: f64 = 1e-9;

/// Constructors reject amplitude vectors whose norm is further than this
/// from 1; inside the band they renormalize.
pub const INPUT_NORM_BAND: f64 = 1e-6;

/// Largest supported register.
pub const MAX_QUBITS: usize = 12;
