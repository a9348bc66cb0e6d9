//! Field-sensing signal and noise from full Lindblad runs.

use rayon::join;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::lindblad::{build_initial_state, evolve_with, Generator, IntegratorConfig, Terms};
use crate::oracle::moments::CollectiveMoments;
use crate::params::{DecoherenceRates, EnsembleParams, ProtocolParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetrologyEstimate {
    /// `d⟨Q_θmin⟩/dB_y` by central difference.
    pub signal_slope: f64,
    /// `d⟨Σσx⟩/dB_y` by central difference.
    pub slope_x: f64,
    /// `√(⟨Q²⟩ − ⟨Q⟩²)` at zero field along the minimal quadrature.
    pub noise: f64,
    pub snr_estimate: f64,
    pub theta_min: f64,
    /// `⟨Σσz⟩` at zero field.
    pub mean_z: f64,
    pub field_step: f64,
}

/// Field step for the central difference: `|B_y|` when non-zero, otherwise
/// `1e-6·Γs`, or `1e-6/T` without decoherence.
pub fn default_field_step(rates: &DecoherenceRates, proto: &ProtocolParams) -> f64 {
    if proto.signal_field != 0.0 {
        proto.signal_field.abs()
    } else if rates.gamma_sum() > 0.0 {
        1e-6 * rates.gamma_sum()
    } else {
        1e-6 / proto.squeeze_time
    }
}

/// Squeezes for `T = proto.squeeze_time` with the field on, measures along
/// the zero-field minimal quadrature, and estimates the signal-to-noise
/// ratio for `τ/T` repetitions.
pub fn simulate_metrology(
    ensemble: &EnsembleParams,
    rates: &DecoherenceRates,
    proto: &ProtocolParams,
    cfg: &IntegratorConfig,
) -> Result<MetrologyEstimate> {
    let step = default_field_step(rates, proto);
    simulate_metrology_with_step(ensemble, rates, proto, cfg, step)
}

pub fn simulate_metrology_with_step(
    ensemble: &EnsembleParams,
    rates: &DecoherenceRates,
    proto: &ProtocolParams,
    cfg: &IntegratorConfig,
    field_step: f64,
) -> Result<MetrologyEstimate> {
    ensemble.validate()?;
    rates.validate()?;
    proto.validate()?;
    if !field_step.is_finite() {
        return Err(Error::Domain(format!("field step must be finite, got {field_step}")));
    }
    let mut cfg = cfg.clone();
    cfg.t_final = proto.squeeze_time;
    let rho = build_initial_state(ensemble)?;
    let run = |b: f64| -> Result<CollectiveMoments> {
        let gen = Generator::new(ensemble.n_spins, rates, proto.coupling, b, Terms::ALL)?;
        Ok(evolve_with(&rho, &cfg, &gen)?.last().moments.clone())
    };
    let (zero, (plus, minus)) = join(|| run(0.0), || join(|| run(field_step), || run(-field_step)));
    let (zero, plus, minus) = (zero?, plus?, minus?);

    let (theta, _) = zero.min_quadrature();
    let noise = zero.central_second_moment(theta).max(0.0).sqrt();
    let (signal_slope, slope_x) = if field_step == 0.0 {
        (0.0, 0.0)
    } else {
        (
            (plus.quadrature_mean(theta) - minus.quadrature_mean(theta)) / (2.0 * field_step),
            (plus.mean_x() - minus.mean_x()) / (2.0 * field_step),
        )
    };
    let reps = (proto.total_time / proto.squeeze_time).sqrt();
    let snr_estimate = if noise > 0.0 { signal_slope * proto.signal_field * reps / noise } else { f64::NAN };
    Ok(MetrologyEstimate {
        signal_slope,
        slope_x,
        noise,
        snr_estimate,
        theta_min: theta.radians(),
        mean_z: zero.mean_z(),
        field_step,
    })
}
