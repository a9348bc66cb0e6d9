//! Gaussian disorder in the pair angles.
//!
//! Each `θ_ij` (i < j) is drawn independently from a density
//! `∝ exp(−α(θ − θ0)²)`, i.e. standard deviation `1/√(2α)`; the fractional
//! spread `κ` fixes `1/α = κ²θ0²`. Under this convention the averages of the
//! cosine products carry exactly the factors `e^{−8(N−2)/α}` (pair terms) and
//! `e^{−4(N−1)/α}` (single terms).

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::finite_polarization::{cos_pow_positive, cos_pow_signed};
use crate::error::{Error, Result, Violations};
use crate::inhomogeneous::closed_form::xi2_theta_couplings;
use crate::inhomogeneous::coupling::{CouplingMatrix, PolarizationVector};
use crate::params::{check_pair_count, QuadratureAngle};

/// Concentrations at or above this value are treated as disorder-free.
pub const ALPHA_CONCENTRATED: f64 = 1e15;
const MAX_REJECTED_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    pub theta0: f64,
    /// Gaussian concentration; `f64::INFINITY` for no disorder.
    pub alpha: f64,
    pub n_samples: usize,
    pub master_seed: u64,
}

impl DisorderSpec {
    pub fn from_alpha(theta0: f64, alpha: f64, n_samples: usize, master_seed: u64) -> Result<Self> {
        let spec = Self { theta0, alpha, n_samples, master_seed };
        spec.violations().into_result()?;
        Ok(spec)
    }

    /// `1/α = κ²θ0²`; `κ = 0` or `θ0 = 0` gives `α = ∞`.
    pub fn from_kappa(theta0: f64, kappa: f64, n_samples: usize, master_seed: u64) -> Result<Self> {
        let mut v = Violations::new();
        v.check(kappa.is_finite() && kappa >= 0.0, "kappa", "kappa ≥ 0", kappa);
        v.into_result()?;
        let inv = kappa * kappa * theta0 * theta0;
        Self::from_alpha(theta0, if inv == 0.0 { f64::INFINITY } else { 1.0 / inv }, n_samples, master_seed)
    }

    /// Accepts `alpha`, `kappa`, or both; when both are given they must
    /// agree to `1e-12` relative.
    pub fn new(
        theta0: f64,
        alpha: Option<f64>,
        kappa: Option<f64>,
        n_samples: usize,
        master_seed: u64,
    ) -> Result<Self> {
        match (alpha, kappa) {
            (Some(a), None) => Self::from_alpha(theta0, a, n_samples, master_seed),
            (None, Some(k)) => Self::from_kappa(theta0, k, n_samples, master_seed),
            (None, None) => Self::from_alpha(theta0, f64::INFINITY, n_samples, master_seed),
            (Some(a), Some(k)) => {
                let spec = Self::from_kappa(theta0, k, n_samples, master_seed)?;
                let consistent = if spec.alpha.is_infinite() || a.is_infinite() {
                    spec.alpha == a
                } else {
                    ((spec.alpha - a) / a).abs() <= 1e-12
                };
                let mut v = Violations::new();
                v.check(consistent, "kappa", "1/alpha = kappa²·theta0²", k);
                v.into_result()?;
                Self::from_alpha(theta0, a, n_samples, master_seed)
            }
        }
    }

    pub fn violations(&self) -> Violations {
        let mut v = Violations::new();
        v.check(self.theta0.is_finite(), "theta0", "theta0 finite", self.theta0);
        v.check(self.alpha > 0.0, "alpha", "alpha > 0", self.alpha);
        v.check(self.n_samples >= 1, "n_samples", "n_samples ≥ 1", self.n_samples as f64);
        v
    }

    pub fn is_concentrated(&self) -> bool {
        self.alpha >= ALPHA_CONCENTRATED
    }

    /// Standard deviation `1/√(2α)` of each angle.
    pub fn std_dev(&self) -> f64 {
        if self.is_concentrated() {
            0.0
        } else {
            (0.5 / self.alpha).sqrt()
        }
    }

    /// Fractional spread `κ = 1/(θ0√α)`.
    pub fn kappa(&self) -> f64 {
        1.0 / (self.theta0.abs() * self.alpha.sqrt())
    }
}

/// Draws sample `sample_index` of the coupling matrix.
///
/// The generator is ChaCha20 keyed by `master_seed` on stream
/// `sample_index`, so each sample is independent of evaluation order.
/// Upper-triangle entries are drawn in row-major order.
pub fn sample_couplings(spec: &DisorderSpec, n_spins: usize, sample_index: u64) -> Result<CouplingMatrix> {
    spec.violations().into_result()?;
    let m = n_spins * n_spins.saturating_sub(1) / 2;
    if spec.is_concentrated() {
        return CouplingMatrix::uniform(n_spins, spec.theta0);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(spec.master_seed);
    rng.set_stream(sample_index);
    let normal = Normal::new(spec.theta0, spec.std_dev())
        .map_err(|e| Error::Domain(format!("invalid disorder distribution: {e}")))?;
    let upper: Vec<f64> = (0..m).map(|_| normal.sample(&mut rng)).collect();
    CouplingMatrix::from_upper(n_spins, &upper)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloResult {
    pub mean: f64,
    pub standard_error: f64,
    pub n_rejected: usize,
    /// Per-sample values in index order; `None` for rejected samples.
    pub samples: Vec<Option<f64>>,
}

/// Sample mean and standard error of [`xi2_theta_couplings`] over the
/// disorder ensemble.
pub fn monte_carlo_mean_xi2(
    spec: &DisorderSpec,
    pols: &PolarizationVector,
    theta: QuadratureAngle,
) -> Result<MonteCarloResult> {
    spec.violations().into_result()?;
    let n = pols.len();
    check_pair_count(n)?;
    if spec.is_concentrated() {
        let value = xi2_theta_couplings(&CouplingMatrix::uniform(n, spec.theta0)?, pols, theta)?;
        return Ok(MonteCarloResult {
            mean: value,
            standard_error: 0.0,
            n_rejected: 0,
            samples: vec![Some(value); spec.n_samples],
        });
    }
    let samples: Vec<Option<f64>> = (0..spec.n_samples as u64)
        .into_par_iter()
        .map(|i| -> Result<Option<f64>> {
            let c = sample_couplings(spec, n, i)?;
            match xi2_theta_couplings(&c, pols, theta) {
                Ok(v) => Ok(Some(v)),
                Err(Error::Numerical(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let accepted: Vec<f64> = samples.iter().flatten().copied().collect();
    let n_rejected = samples.len() - accepted.len();
    if n_rejected as f64 > MAX_REJECTED_FRACTION * spec.n_samples as f64 || accepted.is_empty() {
        return Err(Error::Statistical(format!(
            "{n_rejected} of {} samples had a degenerate denominator",
            spec.n_samples
        )));
    }
    let k = accepted.len() as f64;
    let mean = accepted.iter().sum::<f64>() / k;
    let standard_error = if accepted.len() > 1 {
        let var = accepted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
        (var / k).sqrt()
    } else {
        0.0
    };
    Ok(MonteCarloResult { mean, standard_error, n_rejected, samples })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuppressionReport {
    /// `e^{−8(N−2)/α}`
    pub exp_factor_pair: f64,
    /// `e^{−4(N−1)/α}`
    pub exp_factor_single: f64,
    /// Both factors are at least 0.99.
    pub negligible: bool,
}

pub fn suppression_report(spec: &DisorderSpec, n_spins: usize) -> Result<SuppressionReport> {
    spec.violations().into_result()?;
    check_pair_count(n_spins)?;
    let (pair, single) = suppression_factors(spec, n_spins);
    Ok(SuppressionReport {
        exp_factor_pair: pair,
        exp_factor_single: single,
        negligible: pair >= 0.99 && single >= 0.99,
    })
}

fn suppression_factors(spec: &DisorderSpec, n: usize) -> (f64, f64) {
    if spec.is_concentrated() {
        return (1.0, 1.0);
    }
    let nn = n as f64;
    ((-8.0 * (nn - 2.0) / spec.alpha).exp(), (-4.0 * (nn - 1.0) / spec.alpha).exp())
}

/// Disorder-averaged `ξ²_θ` for fully polarized spins.
///
/// Numerator and denominator are averaged exactly over the Gaussian
/// ensemble; the mean of their ratio adds the leading fluctuation term
/// `σ²M(μA·B₁²/μB³ − A₁B₁/μB²)` with `M = N(N−1)/2` pairs and `A₁`, `B₁`
/// the derivatives with respect to a single pair angle at `θ0`. Setting
/// `unsuppressed` replaces both exponential factors by 1 and drops the
/// fluctuation term, recovering the uniform-coupling result.
pub fn mean_xi2_analytic(
    spec: &DisorderSpec,
    n_spins: usize,
    theta: QuadratureAngle,
    unsuppressed: bool,
) -> Result<f64> {
    spec.violations().into_result()?;
    check_pair_count(n_spins)?;
    let (pair, single) = if unsuppressed { (1.0, 1.0) } else { suppression_factors(spec, n_spins) };
    let (n, t0) = (n_spins as f64, spec.theta0);
    let (sq, cq) = theta.radians().sin_cos();
    let (sin2q, sin_sq) = (2.0 * sq * cq, sq * sq);
    let (s4, c4) = (4.0 * t0).sin_cos();
    let c4_n2 = cos_pow_positive(4.0 * t0, n - 2.0)?;
    let c8_n2 = cos_pow_signed(8.0 * t0, n_spins - 2);

    let mu_a = n * (1.0 + 0.5 * sin_sq * (n - 1.0) * pair * (1.0 - c8_n2) - sin2q * (n - 1.0) * single * s4 * c4_n2);
    let mu_b = n * single * c4_n2 * c4;
    let ratio = mu_a / mu_b;
    if unsuppressed || spec.is_concentrated() {
        return Ok(ratio);
    }

    let c8_n3 = if n_spins >= 3 { cos_pow_signed(8.0 * t0, n_spins - 3) } else { 0.0 };
    let c4_n3 = if n_spins >= 3 { cos_pow_positive(4.0 * t0, n - 3.0)? } else { 0.0 };
    let a1 =
        8.0 * (n - 2.0) * sin_sq * (8.0 * t0).sin() * c8_n3 - 8.0 * sin2q * (c4_n2 * c4 - (n - 2.0) * s4 * s4 * c4_n3);
    let b1 = -8.0 * s4 * c4_n2;
    let var = spec.std_dev().powi(2);
    let pairs = n * (n - 1.0) / 2.0;
    Ok(ratio + var * pairs * (mu_a * b1 * b1 / mu_b.powi(3) - a1 * b1 / mu_b.powi(2)))
}

/// Quoted disorder-averaged form
/// `1 − sin²θ(N−1)e^{−8(N−2)/α}[cos^{N−2}8θ0 − 1] + 2 sin2θ(N−1)e^{−4(N−1)/α} sin4θ0 cos^{N−2}4θ0`.
pub fn mean_xi2_quoted(spec: &DisorderSpec, n_spins: usize, theta: QuadratureAngle, unsuppressed: bool) -> Result<f64> {
    spec.violations().into_result()?;
    check_pair_count(n_spins)?;
    let (pair, single) = if unsuppressed { (1.0, 1.0) } else { suppression_factors(spec, n_spins) };
    let (n, t0) = (n_spins as f64, spec.theta0);
    let th = theta.radians();
    let c4 = cos_pow_positive(4.0 * t0, n - 2.0)?;
    let c8 = cos_pow_signed(8.0 * t0, n_spins - 2);
    Ok(1.0 - th.sin().powi(2) * (n - 1.0) * pair * (c8 - 1.0)
        + 2.0 * (2.0 * th).sin() * (n - 1.0) * single * (4.0 * t0).sin() * c4)
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::analytic::xi2_theta_finite_polarization;

    #[test]
    fn concentrated_branch_is_uniform() {
        let spec = DisorderSpec::from_alpha(0.05, 1e16, 10, 1).unwrap();
        let c = sample_couplings(&spec, 5, 3).unwrap();
        assert_eq!(c, CouplingMatrix::uniform(5, 0.05).unwrap());
        let pols = PolarizationVector::uniform(5, 1.0).unwrap();
        let th = QuadratureAngle::new(0.3);
        let mc = monte_carlo_mean_xi2(&spec, &pols, th).unwrap();
        assert_eq!(mc.mean, xi2_theta_couplings(&c, &pols, th).unwrap());
        assert_eq!(mc.standard_error, 0.0);
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = DisorderSpec::from_kappa(0.05, 0.1, 10, 42).unwrap();
        let a = sample_couplings(&spec, 6, 7).unwrap();
        let b = sample_couplings(&spec, 6, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_couplings(&spec, 6, 8).unwrap());
    }

    #[test]
    fn single_sample_mean() {
        let spec = DisorderSpec::from_kappa(0.05, 0.2, 1, 9).unwrap();
        let pols = PolarizationVector::uniform(6, 1.0).unwrap();
        let th = QuadratureAngle::new(0.4);
        let mc = monte_carlo_mean_xi2(&spec, &pols, th).unwrap();
        let direct = xi2_theta_couplings(&sample_couplings(&spec, 6, 0).unwrap(), &pols, th).unwrap();
        assert_eq!(mc.mean, direct);
    }

    #[test]
    fn kappa_alpha_consistency() {
        let spec = DisorderSpec::from_kappa(0.05, 0.1, 1, 0).unwrap();
        assert_relative_eq!(spec.alpha, 1.0 / (0.01 * 0.0025), max_relative = 1e-14);
        assert_relative_eq!(spec.kappa(), 0.1, max_relative = 1e-14);
        assert!(DisorderSpec::new(0.05, Some(spec.alpha), Some(0.1), 1, 0).is_ok());
        assert!(DisorderSpec::new(0.05, Some(spec.alpha * 1.01), Some(0.1), 1, 0).is_err());
        assert!(DisorderSpec::from_kappa(0.05, 0.0, 1, 0).unwrap().alpha.is_infinite());
    }

    #[test]
    fn suppression_examples() {
        let none = DisorderSpec::from_kappa(0.05, 0.0, 1, 0).unwrap();
        let r = suppression_report(&none, 20).unwrap();
        assert_eq!((r.exp_factor_pair, r.exp_factor_single, r.negligible), (1.0, 1.0, true));
        let n = 50;
        let spec = DisorderSpec::from_alpha(0.05, 8.0 * (n as f64 - 2.0) / 100f64.ln(), 1, 0).unwrap();
        let r = suppression_report(&spec, n).unwrap();
        assert_relative_eq!(r.exp_factor_pair, 0.01, max_relative = 1e-12);
        assert!(!r.negligible);
    }

    #[test]
    fn analytic_mean_limits() {
        let spec = DisorderSpec::from_kappa(0.05, 0.1, 1, 0).unwrap();
        // at θ = 0 only the mean polarization enters
        let unsup = mean_xi2_analytic(&spec, 20, QuadratureAngle::new(0.0), true).unwrap();
        assert_relative_eq!(unsup, 1.0 / 0.2f64.cos().powi(19), max_relative = 1e-13);
        let flat = DisorderSpec::from_kappa(0.0, 0.0, 1, 0).unwrap();
        assert_relative_eq!(mean_xi2_analytic(&flat, 20, QuadratureAngle::new(0.7), false).unwrap(), 1.0);
        let none = DisorderSpec::from_kappa(0.05, 0.0, 1, 0).unwrap();
        for th in [0.1, 0.5, 2.0] {
            let q = QuadratureAngle::new(th);
            assert_relative_eq!(
                mean_xi2_analytic(&none, 20, q, false).unwrap(),
                xi2_theta_finite_polarization(20, 1.0, 0.05, q).unwrap(),
                max_relative = 1e-12
            );
            assert_relative_eq!(
                mean_xi2_analytic(&spec, 20, q, true).unwrap(),
                xi2_theta_finite_polarization(20, 1.0, 0.05, q).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn quoted_mean_limits() {
        let spec = DisorderSpec::from_kappa(0.05, 0.1, 1, 0).unwrap();
        assert_eq!(mean_xi2_quoted(&spec, 20, QuadratureAngle::new(0.0), false).unwrap(), 1.0);
        let flat = DisorderSpec::from_kappa(0.0, 0.0, 1, 0).unwrap();
        assert_eq!(mean_xi2_quoted(&flat, 20, QuadratureAngle::new(1.0), false).unwrap(), 1.0);
    }
}
