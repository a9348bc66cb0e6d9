//! Published reference values, kept as metadata for comparison only.

/// Optimal dimensionless squeezing duration `Θ_min`.
pub const THETA_MIN: f64 = 2.0 / 3.0;
/// Optimal dimensionless duration for field sensing, `Θ_max`.
pub const THETA_MAX: f64 = 0.727;

/// Quoted coefficients of the squeezing optimum at `Θ_min`: overall factor,
/// projection-noise bracket, curvature bracket.
pub const SQUEEZING_COEFFICIENTS: [f64; 3] = [1.948, 2.134, 0.132];

/// Quoted coefficients of the sensitivity optimum at `Θ_max`: prefactor and
/// denominator correction.
pub const SENSITIVITY_COEFFICIENTS: [f64; 2] = [0.205, 0.092];
