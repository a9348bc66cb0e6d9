//! Squeezing with inhomogeneous pair couplings and its disorder average.

pub mod closed_form;
pub mod coupling;
pub mod disorder;

pub use closed_form::{pair_moments, xi2_parts, xi2_theta_couplings, PairMoments};
pub use coupling::{CouplingMatrix, PolarizationVector};
pub use disorder::{
    mean_xi2_analytic, mean_xi2_quoted, monte_carlo_mean_xi2, sample_couplings, suppression_report, DisorderSpec,
    MonteCarloResult, SuppressionReport,
};
