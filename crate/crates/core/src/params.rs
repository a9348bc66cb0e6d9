//! Parameter types shared by every module.
//!
//! Units: ħ = 1. Couplings, rates and fields are in 1/time, so the
//! dimensionless twisting angle is `θ0 = J·t` and the dimensionless
//! squeezing duration is `Θ = 2(Γ∥ + Γ⊥)T`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Result, Violations};

/// Spin count and initial per-spin polarization `P = ⟨σz⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub n_spins: usize,
    pub polarization: f64,
}

impl EnsembleParams {
    pub fn new(n_spins: usize, polarization: f64) -> Result<Self> {
        let params = Self { n_spins, polarization };
        params.violations().into_result()?;
        Ok(params)
    }

    pub fn violations(&self) -> Violations {
        let mut v = Violations::new();
        v.check(self.n_spins >= 1, "n_spins", "n_spins ≥ 1", self.n_spins as f64);
        v.extend(polarization_violations(self.polarization));
        v
    }

    pub fn validate(&self) -> Result<()> {
        self.violations().into_result()
    }
}

pub(crate) fn polarization_violations(p: f64) -> Violations {
    let mut v = Violations::new();
    v.check(p.is_finite(), "polarization", "polarization finite", p);
    v.check(p > 0.0, "polarization", "polarization > 0", p);
    v.check(p <= 1.0, "polarization", "polarization ≤ 1", p);
    v
}

pub(crate) fn check_polarization(p: f64) -> Result<()> {
    polarization_violations(p).into_result()
}

pub(crate) fn check_pair_count(n: usize) -> Result<()> {
    let mut v = Violations::new();
    v.check(n >= 2, "n_spins", "n_spins ≥ 2", n as f64);
    v.into_result()
}

/// Longitudinal (Γ∥, along the twisting axis x) and transverse (Γ⊥) rates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DecoherenceRates {
    pub gamma_par: f64,
    pub gamma_perp: f64,
}

impl DecoherenceRates {
    pub fn new(gamma_par: f64, gamma_perp: f64) -> Result<Self> {
        let rates = Self { gamma_par, gamma_perp };
        rates.violations().into_result()?;
        Ok(rates)
    }

    /// Decoherence-free rates.
    pub fn none() -> Self {
        Self::default()
    }

    /// `Γ∥ + Γ⊥`, the combination entering every decay exponent.
    pub fn gamma_sum(&self) -> f64 {
        self.gamma_par + self.gamma_perp
    }

    /// Dimensionless duration `Θ = 2(Γ∥ + Γ⊥)T`.
    pub fn theta_big(&self, squeeze_time: f64) -> f64 {
        2.0 * self.gamma_sum() * squeeze_time
    }

    pub fn violations(&self) -> Violations {
        let mut v = Violations::new();
        v.check(self.gamma_par.is_finite(), "gamma_par", "gamma_par finite", self.gamma_par);
        v.check(self.gamma_par >= 0.0, "gamma_par", "gamma_par ≥ 0", self.gamma_par);
        v.check(self.gamma_perp.is_finite(), "gamma_perp", "gamma_perp finite", self.gamma_perp);
        v.check(self.gamma_perp >= 0.0, "gamma_perp", "gamma_perp ≥ 0", self.gamma_perp);
        v
    }

    pub fn validate(&self) -> Result<()> {
        self.violations().into_result()
    }
}

/// Squeezing coupling `J`, squeezing time `T`, signal field `B_y` and total
/// measurement time `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolParams {
    pub coupling: f64,
    pub squeeze_time: f64,
    pub signal_field: f64,
    pub total_time: f64,
}

impl ProtocolParams {
    pub fn new(coupling: f64, squeeze_time: f64, signal_field: f64, total_time: f64) -> Result<Self> {
        let proto = Self { coupling, squeeze_time, signal_field, total_time };
        proto.violations().into_result()?;
        Ok(proto)
    }

    /// Squeezing only: no signal, `τ = T`.
    pub fn squeezing(coupling: f64, squeeze_time: f64) -> Result<Self> {
        Self::new(coupling, squeeze_time, 0.0, squeeze_time)
    }

    /// Twisting angle `θ0 = J·T`.
    pub fn theta0(&self) -> f64 {
        self.coupling * self.squeeze_time
    }

    pub fn violations(&self) -> Violations {
        let mut v = Violations::new();
        v.check(self.coupling.is_finite(), "coupling", "coupling finite", self.coupling);
        v.check(self.coupling >= 0.0, "coupling", "coupling ≥ 0", self.coupling);
        v.check(self.squeeze_time.is_finite(), "squeeze_time", "squeeze_time finite", self.squeeze_time);
        v.check(self.squeeze_time > 0.0, "squeeze_time", "squeeze_time > 0", self.squeeze_time);
        v.check(self.signal_field.is_finite(), "signal_field", "signal_field finite", self.signal_field);
        v.check(self.total_time >= self.squeeze_time, "total_time", "total_time ≥ squeeze_time", self.total_time);
        v
    }

    pub fn validate(&self) -> Result<()> {
        self.violations().into_result()
    }
}

/// Quadrature angle in the x–y plane, measured from x, canonicalized to `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct QuadratureAngle(f64);

impl QuadratureAngle {
    pub fn new(theta: f64) -> Self {
        let mut t = theta.rem_euclid(PI);
        // rem_euclid can round up to exactly π for tiny negative inputs
        if t >= PI {
            t -= PI;
        }
        Self(t)
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

impl From<f64> for QuadratureAngle {
    fn from(theta: f64) -> Self {
        Self::new(theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    DecoherenceDominated,
    OversqueezingDominated,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezingReport {
    pub xi2_min: f64,
    pub theta_min: f64,
    pub effective_polarization: f64,
    /// Optimal `Θ` when decoherence is present, optimal time `t` otherwise.
    pub optimal_time_or_theta: f64,
    pub regime: Regime,
}

/// A parameter bundle that passed [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub ensemble: EnsembleParams,
    pub rates: DecoherenceRates,
    pub protocol: ProtocolParams,
}

impl Scenario {
    pub fn validate(self) -> std::result::Result<Scenario, Violations> {
        validate(self.ensemble, self.rates, self.protocol)
    }
}

/// Checks every invariant of the three parameter groups and reports all
/// violations together.
pub fn validate(
    ensemble: EnsembleParams,
    rates: DecoherenceRates,
    protocol: ProtocolParams,
) -> std::result::Result<Scenario, Violations> {
    let mut v = ensemble.violations();
    v.extend(rates.violations());
    v.extend(protocol.violations());
    if v.is_empty() {
        Ok(Scenario { ensemble, rates, protocol })
    } else {
        Err(v)
    }
}
