//! One-axis-twisting spin squeezing under decoherence: closed forms, an exact
//! small-N oracle, and a disorder model for inhomogeneous couplings.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod inhomogeneous;
pub mod oracle;
pub mod params;
pub mod reference;
pub mod verify;

pub use error::{Error, Result, Violation, Violations};
pub use params::{
    validate, DecoherenceRates, EnsembleParams, ProtocolParams, QuadratureAngle, Regime, Scenario, SqueezingReport,
};
