//! Closed-form squeezing and sensitivity results plus the scalar optimizer.

pub mod decoherence;
pub mod finite_polarization;
pub mod metrology;
pub mod optimize;

pub use decoherence::{
    effective_polarization, squeezing_coefficients, squeezing_optimum, xi2_after_dephasing, xi2_after_dephasing_exact,
    xi2_min_decoherence, xi2_min_decoherence_theta,
};
pub use finite_polarization::{
    optimal_time_pure, optimal_time_pure_with, xi2_min_approx, xi2_min_approx_with, xi2_min_finite_polarization,
    xi2_theta_approx_angle, xi2_theta_finite_polarization, PureOptimum, QuadratureExtrema, OVERSQUEEZE_LARGE_N,
    OVERSQUEEZE_QUOTED,
};
pub use metrology::{
    decoherence_profile, effective_field, max_sensitivity, sensitivity, sensitivity_coefficients, signal_to_noise,
    DenominatorCoefficient, MetrologyOptimum, SensitivityCurvePoint,
};
pub use optimize::{optimize_scalar, Extremum, OptimizerConfig, Sense};
