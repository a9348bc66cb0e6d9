//! Exact small-N dynamics used as ground truth for the closed forms.

pub mod density;
pub mod factorization;
pub mod kraus;
pub mod lindblad;
pub mod metrology;
pub mod moments;
pub mod pauli;
pub mod unitary;

pub use density::{trace_distance, DensityMatrix, MAX_SPINS};
pub use factorization::{factorization_gap, factorization_scan, FactorizationGap, ScanPoint};
pub use kraus::{apply_dephasing, apply_dephasing_closed, apply_dephasing_sites, apply_single_site, dephasing_kraus};
pub use lindblad::{
    apply_generator, build_initial_state, evolve, evolve_with, lindblad_rhs, Checkpoint, Generator, IntegratorConfig,
    Terms, Trajectory,
};
pub use metrology::{simulate_metrology, simulate_metrology_with_step, MetrologyEstimate};
pub use moments::{CollectiveMoments, PairCorrelation};
pub use pauli::{expectation, Pauli};
pub use unitary::{apply_twisting, evolve_variable_coupling, twisted_state};
