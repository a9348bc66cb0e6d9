//! Distance between joint evolution `exp[T(ℒ1+ℒ2)]ρ` and the factorized
//! `exp[Tℒ1]exp[Tℒ2]ρ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::density::{trace_distance, MAX_SPINS};
use crate::oracle::lindblad::{build_initial_state, evolve_with, Generator, IntegratorConfig, Terms};
use crate::params::{DecoherenceRates, EnsembleParams, ProtocolParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorizationGap {
    pub n_spins: usize,
    /// Trace distance of the full states.
    pub gap: f64,
    /// Trace distance of the two-spin reduced states of spins 0 and 1.
    pub pair_gap: f64,
}

pub fn factorization_gap(
    ensemble: &EnsembleParams,
    rates: &DecoherenceRates,
    proto: &ProtocolParams,
    cfg: &IntegratorConfig,
) -> Result<FactorizationGap> {
    ensemble.validate()?;
    proto.validate()?;
    if ensemble.n_spins < 2 {
        return Err(Error::Domain("factorization gap needs at least two spins".into()));
    }
    let n = ensemble.n_spins;
    let mut cfg = cfg.clone();
    cfg.t_final = proto.squeeze_time;
    let rho = build_initial_state(ensemble)?;
    let gen = |terms| Generator::new(n, rates, proto.coupling, 0.0, terms);

    let joint = evolve_with(&rho, &cfg, &gen(Terms::SQUEEZING)?)?.final_state;
    let decayed = evolve_with(&rho, &cfg, &gen(Terms::DISSIPATION)?)?.final_state;
    let factorized = evolve_with(&decayed, &cfg, &gen(Terms::HAMILTONIAN)?)?.final_state;

    Ok(FactorizationGap {
        n_spins: n,
        gap: trace_distance(&joint, &factorized)?,
        pair_gap: trace_distance(&joint.partial_trace_keep(&[0, 1])?, &factorized.partial_trace_keep(&[0, 1])?)?,
    })
}

/// Fixed dimensionless point of a scan over `N`: twisting `N·J·T`, decay
/// `Γs·T`, share of `Γ∥` in `Γs`, squeeze time `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub n_j_t: f64,
    pub gamma_t: f64,
    pub par_fraction: f64,
    pub squeeze_time: f64,
    pub polarization: f64,
}

impl Default for ScanPoint {
    fn default() -> Self {
        Self { n_j_t: 0.5, gamma_t: 0.5, par_fraction: 0.4, squeeze_time: 1.0, polarization: 1.0 }
    }
}

/// [`factorization_gap`] for each `N` in `n_range` at a fixed [`ScanPoint`].
pub fn factorization_scan(
    n_range: std::ops::RangeInclusive<usize>,
    point: &ScanPoint,
    dt: f64,
) -> Result<Vec<FactorizationGap>> {
    if *n_range.start() < 2 || *n_range.end() > MAX_SPINS {
        return Err(Error::Domain(format!("spin counts must lie in 2..={MAX_SPINS}")));
    }
    let t = point.squeeze_time;
    let gs = point.gamma_t / t;
    let rates = DecoherenceRates::new(point.par_fraction * gs, (1.0 - point.par_fraction) * gs)?;
    n_range
        .map(|n| {
            let ensemble = EnsembleParams::new(n, point.polarization)?;
            let proto = ProtocolParams::squeezing(point.n_j_t / (n as f64 * t), t)?;
            factorization_gap(&ensemble, &rates, &proto, &IntegratorConfig::new(dt, t))
        })
        .collect()
}
