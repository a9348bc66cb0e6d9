//! Squeezing limited by single-spin decoherence.
//!
//! Over a squeezing time `T` the dissipator only shrinks the polarization,
//! `P → P e^{−2ΓsT}` with `Γs = Γ∥ + Γ⊥`, so the large-N minimum becomes
//!
//! ```text
//! ξ²_min(T) = P⁻¹e^{2ΓsT}[P⁻²e^{4ΓsT}/(16N²J²T²) + (32/3)N²J⁴T⁴]
//! ```
//!
//! and in terms of `Θ = 2ΓsT`
//!
//! ```text
//! ξ²_min(Θ) = P⁻¹e^{Θ}[P⁻²Γs² e^{2Θ}/(4N²J²Θ²) + (2/3)N²J⁴Θ⁴/Γs⁴]
//! ```

use crate::analytic::finite_polarization::{
    optimal_time_pure, xi2_min_approx, xi2_min_finite_polarization, OVERSQUEEZE_QUOTED,
};
use crate::analytic::optimize::{optimize_scalar, OptimizerConfig, Sense};
use crate::error::{Error, Result, Violations};
use crate::params::{check_polarization, DecoherenceRates, EnsembleParams, Regime, SqueezingReport};

/// Below this value of `ΓsT` the decoherence-free limits are used.
pub const SMALL_DECAY: f64 = 1e-12;

fn check_time(t: f64) -> Result<()> {
    let mut v = Violations::new();
    v.check(t.is_finite() && t >= 0.0, "squeeze_time", "squeeze_time ≥ 0", t);
    v.into_result()
}

/// `P e^{−2ΓsT}`.
pub fn effective_polarization(p: f64, rates: &DecoherenceRates, t: f64) -> Result<f64> {
    check_polarization(p)?;
    rates.validate()?;
    check_time(t)?;
    Ok(p * (-rates.theta_big(t)).exp())
}

/// Large-N minimal squeezing after time `T` with decoherence.
pub fn xi2_min_decoherence(n: usize, p: f64, rates: &DecoherenceRates, coupling: f64, t: f64) -> Result<f64> {
    rates.validate()?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("squeezing time must be positive, got {t}")));
    }
    let pe = effective_polarization(p, rates, t)?;
    xi2_min_approx(n, pe, coupling, t)
}

/// Same quantity as [`xi2_min_decoherence`] with `Θ = 2ΓsT` as the argument.
pub fn xi2_min_decoherence_theta(
    n: usize,
    p: f64,
    rates: &DecoherenceRates,
    coupling: f64,
    theta_big: f64,
) -> Result<f64> {
    check_polarization(p)?;
    rates.validate()?;
    let gs = rates.gamma_sum();
    if !(gs > 0.0) {
        return Err(Error::Domain("the Θ form needs Γ∥ + Γ⊥ > 0".into()));
    }
    if !(theta_big > 0.0) || !theta_big.is_finite() {
        return Err(Error::Domain(format!("Θ must be positive and finite, got {theta_big}")));
    }
    if !(coupling > 0.0) {
        return Err(Error::Domain(format!("J must be positive, got {coupling}")));
    }
    let nn = n as f64;
    let (n2, j2, th2) = (nn * nn, coupling * coupling, theta_big * theta_big);
    let noise = gs * gs * (2.0 * theta_big).exp() / (p * p * 4.0 * n2 * j2 * th2);
    let curvature = (2.0 / 3.0) * n2 * j2 * j2 * th2 * th2 / gs.powi(4);
    Ok(theta_big.exp() * (noise + curvature) / p)
}

/// `ξ²` after per-spin dephasing with survival amplitude `s`, in the quoted
/// form `1 − (P − ξ²)s²`.
///
/// Only consistent at `s = 1` when `P = 1`; see [`xi2_after_dephasing_exact`].
pub fn xi2_after_dephasing(xi2_0: f64, p: f64, s: f64) -> Result<f64> {
    check_dephasing_inputs(xi2_0, s)?;
    Ok(1.0 - (p - xi2_0) * s * s)
}

/// `ξ²` after dephasing, `P⁻¹ − (P⁻¹ − ξ²)s²`, where `P` is the mean
/// z-polarization per spin of the dephased state (unchanged by the channel).
pub fn xi2_after_dephasing_exact(xi2_0: f64, p: f64, s: f64) -> Result<f64> {
    check_dephasing_inputs(xi2_0, s)?;
    check_polarization(p)?;
    Ok(1.0 / p - (1.0 / p - xi2_0) * s * s)
}

fn check_dephasing_inputs(xi2_0: f64, s: f64) -> Result<()> {
    let mut v = Violations::new();
    v.check(xi2_0 > 0.0 && xi2_0.is_finite(), "xi2_0", "xi2_0 > 0", xi2_0);
    v.check((0.0..=1.0).contains(&s), "survival", "0 ≤ s ≤ 1", s);
    v.into_result()
}

/// The three coefficients obtained by substituting `Θ` into the `Θ` form:
/// the overall `e^{Θ}`, the noise bracket `e^{2Θ}/Θ²` relative to
/// `Γs²/(4N²J²P²)`, and the curvature bracket `(2/3)Θ⁴` relative to
/// `N²J⁴/Γs⁴`.
pub fn squeezing_coefficients(theta_big: f64) -> [f64; 3] {
    let t2 = theta_big * theta_big;
    [theta_big.exp(), (2.0 * theta_big).exp() / t2, (2.0 / 3.0) * t2 * t2]
}

/// Optimal squeezing time for the given ensemble.
///
/// With decoherence the `Θ` form is minimized numerically; without it the
/// closed-form stationary time is used. The angle and polarization in the
/// report come from the exact finite-polarization formula evaluated at the
/// effective polarization when its domain allows, otherwise from the
/// large-N expression with `θ_min = 0`.
pub fn squeezing_optimum(
    ensemble: &EnsembleParams,
    rates: &DecoherenceRates,
    coupling: f64,
    cfg: &OptimizerConfig,
) -> Result<SqueezingReport> {
    ensemble.validate()?;
    rates.validate()?;
    let (n, p) = (ensemble.n_spins, ensemble.polarization);
    let gs = rates.gamma_sum();
    if gs > 0.0 {
        let best = optimize_scalar(
            |th| xi2_min_decoherence_theta(n, p, rates, coupling, th).unwrap_or(f64::NAN),
            cfg,
            Sense::Minimize,
        )?;
        let t = best.x / (2.0 * gs);
        let pe = effective_polarization(p, rates, t)?;
        let nn = n as f64;
        let curvature = OVERSQUEEZE_QUOTED * nn * nn * (coupling * t).powi(4);
        let noise = 1.0 / (pe * pe * 16.0 * nn * nn * (coupling * t).powi(2));
        let regime = classify(curvature / noise, best.x);
        Ok(SqueezingReport {
            xi2_min: best.value,
            theta_min: exact_angle(n, pe, coupling * t),
            effective_polarization: pe,
            optimal_time_or_theta: best.x,
            regime,
        })
    } else {
        let opt = optimal_time_pure(n, p, coupling)?;
        Ok(SqueezingReport {
            xi2_min: opt.xi2,
            theta_min: exact_angle(n, p, coupling * opt.t_star),
            effective_polarization: p,
            optimal_time_or_theta: opt.t_star,
            regime: Regime::OversqueezingDominated,
        })
    }
}

fn exact_angle(n: usize, p: f64, theta0: f64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    xi2_min_finite_polarization(n, p, theta0).map(|e| e.theta_min).unwrap_or(0.0)
}

/// Regime from the ratio of over-squeezing to projection-noise terms and
/// from how much decay accumulated.
pub(crate) fn classify(curvature_ratio: f64, theta_big: f64) -> Regime {
    if theta_big < 0.01 {
        Regime::OversqueezingDominated
    } else if curvature_ratio < 0.01 {
        Regime::DecoherenceDominated
    } else {
        Regime::Mixed
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    fn rates(a: f64, b: f64) -> DecoherenceRates {
        DecoherenceRates::new(a, b).unwrap()
    }

    #[test]
    fn effective_polarization_values() {
        assert_eq!(effective_polarization(0.8, &rates(0.3, 0.7), 0.0).unwrap(), 0.8);
        assert_relative_eq!(
            effective_polarization(1.0, &rates(0.25, 0.25), 1.0).unwrap(),
            (-1f64).exp(),
            max_relative = 1e-15
        );
        assert!(effective_polarization(1.2, &rates(0.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn decoherence_free_limit() {
        let a = xi2_min_decoherence(100, 0.7, &DecoherenceRates::none(), 1e-3, 3.0).unwrap();
        let b = xi2_min_approx(100, 0.7, 1e-3, 3.0).unwrap();
        assert_eq!(a, b);
        let mut prev = f64::INFINITY;
        for k in 3..=9 {
            let g = 10f64.powi(-k);
            let v = xi2_min_decoherence(100, 0.7, &rates(g, 0.0), 1e-3, 3.0).unwrap();
            let rel = (v / b - 1.0).abs();
            assert!(rel < prev || rel < 1e-14);
            prev = rel;
        }
        assert!(prev < 1e-7);
    }

    #[test]
    fn time_and_theta_forms_agree() {
        let r = rates(0.02, 0.03);
        let th = 2.0 / 3.0;
        let t = th / (2.0 * r.gamma_sum());
        let a = xi2_min_decoherence(100, 1.0, &r, 1e-3, t).unwrap();
        let b = xi2_min_decoherence_theta(100, 1.0, &r, 1e-3, th).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn zero_time_rejected() {
        assert!(matches!(xi2_min_decoherence(10, 1.0, &rates(0.1, 0.1), 1.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn dephasing_quoted_values() {
        assert_relative_eq!(xi2_after_dephasing(0.1, 1.0, 1.0).unwrap(), 0.1, max_relative = 1e-15);
        assert_eq!(xi2_after_dephasing(0.1, 1.0, 0.0).unwrap(), 1.0);
        let s = (-1f64).exp();
        assert_relative_eq!(xi2_after_dephasing(0.1, 1.0, s).unwrap(), 1.0 - 0.9 * (-2f64).exp(), max_relative = 1e-15);
        assert!((xi2_after_dephasing(0.1, 1.0, s).unwrap() - 0.878198).abs() < 1e-6);
        assert!(xi2_after_dephasing(0.1, 1.0, 1.5).is_err());
    }

    #[test]
    fn dephasing_exact_form() {
        assert_relative_eq!(xi2_after_dephasing_exact(0.3, 0.6, 1.0).unwrap(), 0.3, max_relative = 1e-15);
        assert_relative_eq!(xi2_after_dephasing_exact(0.3, 0.6, 0.0).unwrap(), 1.0 / 0.6, max_relative = 1e-15);
        for s in [0.0, 0.3, 0.9] {
            assert_relative_eq!(
                xi2_after_dephasing_exact(0.2, 1.0, s).unwrap(),
                xi2_after_dephasing(0.2, 1.0, s).unwrap(),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn optimum_in_decoherence_dominated_regime() {
        let e = EnsembleParams::new(100, 1.0).unwrap();
        let cfg = OptimizerConfig::with_bracket(1e-3, 20.0);
        let rep = squeezing_optimum(&e, &rates(0.02, 0.03), 1e-4, &cfg).unwrap();
        assert!((rep.optimal_time_or_theta - 2.0 / 3.0).abs() < 1e-4, "{}", rep.optimal_time_or_theta);
        assert_eq!(rep.regime, Regime::DecoherenceDominated);
        assert!(rep.xi2_min > 0.0);
    }

    #[test]
    fn optimum_without_decoherence() {
        let e = EnsembleParams::new(1000, 1.0).unwrap();
        let rep = squeezing_optimum(&e, &DecoherenceRates::none(), 1.0, &OptimizerConfig::default()).unwrap();
        let opt = optimal_time_pure(1000, 1.0, 1.0).unwrap();
        assert_eq!(rep.optimal_time_or_theta, opt.t_star);
        assert_eq!(rep.regime, Regime::OversqueezingDominated);
    }
}
