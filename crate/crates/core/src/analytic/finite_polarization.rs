//! Uniform-coupling squeezing of a partially polarized product state.
//!
//! All spins start with Bloch vector `(0, 0, P)` and evolve under
//! `U = Π_{i≠j} exp(−iθ0 σx^i σx^j)`. The quadrature ratio is
//!
//! ```text
//! ξ²_θ = [1 + ½(N−1)P² sin²θ (1 − c8) − (N−1)P sin2θ sin4θ0 c4] / [P c4 cos4θ0]
//! c4 = cos^{N−2}(4θ0),   c8 = cos^{N−2}(8θ0)
//! ```
//!
//! which agrees with exact unitary evolution to rounding error.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::params::{check_pair_count, check_polarization, QuadratureAngle};

/// Over-squeezing coefficient of the large-N minimum in its quoted form.
pub const OVERSQUEEZE_QUOTED: f64 = 32.0 / 3.0;

/// Over-squeezing coefficient obtained by expanding the exact minimum to
/// leading order in `N θ0²`.
pub const OVERSQUEEZE_LARGE_N: f64 = 128.0 / 3.0;

/// `cos^k(x)` through `exp(k ln cos x)`; requires `cos x > 0`.
pub(crate) fn cos_pow_positive(x: f64, k: f64) -> Result<f64> {
    let c = x.cos();
    if !(c > 0.0) || x.abs() >= FRAC_PI_2 {
        return Err(Error::Domain(format!("cos({x}) must be positive for the log-space power (|x| < π/2)")));
    }
    Ok((k * c.ln()).exp())
}

/// `cos^k(x)` for integer `k` with the sign kept outside the logarithm.
pub(crate) fn cos_pow_signed(x: f64, k: usize) -> f64 {
    let c = x.cos();
    if k == 0 {
        return 1.0;
    }
    if c == 0.0 {
        return 0.0;
    }
    let magnitude = (k as f64 * c.abs().ln()).exp();
    if c < 0.0 && k % 2 == 1 {
        -magnitude
    } else {
        magnitude
    }
}

/// Shared pieces of the uniform-coupling closed form.
#[derive(Debug, Clone, Copy)]
struct UniformTerms {
    /// `1 − cos^{N−2}(8θ0)`
    curvature: f64,
    /// `sin(4θ0) cos^{N−2}(4θ0)`
    shear: f64,
    /// `P cos^{N−1}(4θ0)`, the mean z-polarization per spin
    polarization: f64,
}

fn uniform_terms(n: usize, p: f64, theta0: f64) -> Result<UniformTerms> {
    check_pair_count(n)?;
    check_polarization(p)?;
    if !theta0.is_finite() {
        return Err(Error::Domain(format!("theta0 must be finite, got {theta0}")));
    }
    let k = (n - 2) as f64;
    let c4 = cos_pow_positive(4.0 * theta0, k)?;
    let c8 = cos_pow_signed(8.0 * theta0, n - 2);
    Ok(UniformTerms {
        curvature: 1.0 - c8,
        shear: (4.0 * theta0).sin() * c4,
        polarization: p * c4 * (4.0 * theta0).cos(),
    })
}

/// Exact quadrature ratio `ξ²_θ` after uniform twisting by `θ0`.
pub fn xi2_theta_finite_polarization(n: usize, p: f64, theta0: f64, theta: QuadratureAngle) -> Result<f64> {
    let u = uniform_terms(n, p, theta0)?;
    let th = theta.radians();
    let m = (n - 1) as f64;
    let numerator = 1.0 + 0.5 * m * p * p * th.sin().powi(2) * u.curvature - m * p * (2.0 * th).sin() * u.shear;
    Ok(numerator / u.polarization)
}

/// Minimum and maximum of the quadrature ratio over the angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureExtrema {
    pub xi2_min: f64,
    pub theta_min: f64,
    pub xi2_max: f64,
}

/// Closed-form minimization of [`xi2_theta_finite_polarization`] over `θ`.
///
/// `tan 2θ_min = 4 sin4θ0 cos^{N−2}4θ0 / (P[1 − cos^{N−2}8θ0])`; the
/// anti-squeezed quadrature sits at `θ_min + π/2`.
pub fn xi2_min_finite_polarization(n: usize, p: f64, theta0: f64) -> Result<QuadratureExtrema> {
    let u = uniform_terms(n, p, theta0)?;
    let m = (n - 1) as f64;
    let a = 0.25 * p * p * u.curvature;
    let b = p * u.shear;
    let radius = a.hypot(b);
    let theta_min =
        if radius == 0.0 { 0.0 } else { QuadratureAngle::new(0.5 * (4.0 * u.shear).atan2(p * u.curvature)).radians() };
    Ok(QuadratureExtrema {
        xi2_min: (1.0 + m * (a - radius)) / u.polarization,
        theta_min,
        xi2_max: (1.0 + m * (a + radius)) / u.polarization,
    })
}

/// Large-N minimum `P⁻¹[P⁻²/(16N²J²t²) + (32/3)N²J⁴t⁴]` in its quoted form.
pub fn xi2_min_approx(n: usize, p: f64, coupling: f64, t: f64) -> Result<f64> {
    xi2_min_approx_with(n, p, coupling, t, OVERSQUEEZE_QUOTED)
}

/// Large-N minimum `P⁻¹[P⁻²/(16N²J²t²) + c·N²J⁴t⁴]` with an explicit
/// over-squeezing coefficient `c`.
pub fn xi2_min_approx_with(n: usize, p: f64, coupling: f64, t: f64, oversqueeze: f64) -> Result<f64> {
    check_polarization(p)?;
    let jt = coupling * t;
    if !(jt > 0.0) || !jt.is_finite() {
        return Err(Error::Domain(format!("J·t must be positive and finite for the large-N minimum, got {jt}")));
    }
    let nn = n as f64;
    let n2 = nn * nn;
    let jt2 = jt * jt;
    Ok((1.0 / (p * p * 16.0 * n2 * jt2) + oversqueeze * n2 * jt2 * jt2) / p)
}

/// Cosine-shaped angle dependence around the minimum, centered at `8θ0`.
///
/// `ξ²_θ ≅ ξ²_min + (P⁻¹ + 16(N−1)(N−2)Pθ0² − ξ²_min)(1 − cos 2[θ − 8θ0])`, with
/// `ξ²_min` taken from the exact closed-form minimum.
pub fn xi2_theta_approx_angle(n: usize, p: f64, theta0: f64, theta: QuadratureAngle) -> Result<f64> {
    let xi2_min = xi2_min_finite_polarization(n, p, theta0)?.xi2_min;
    let nn = n as f64;
    let span = 1.0 / p + 16.0 * (nn - 1.0) * (nn - 2.0) * p * theta0 * theta0 - xi2_min;
    Ok(xi2_min + span * (1.0 - (2.0 * (theta.radians() - 8.0 * theta0)).cos()))
}

/// Stationary time of the large-N minimum and the minimum there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureOptimum {
    pub t_star: f64,
    pub xi2: f64,
}

/// Stationary point of [`xi2_min_approx`]:
/// `t* = 3^{1/6} 2^{−5/3} P^{−1/3} / (J N^{2/3})`, giving `ξ² ∝ P^{−7/3} N^{−2/3}`.
pub fn optimal_time_pure(n: usize, p: f64, coupling: f64) -> Result<PureOptimum> {
    optimal_time_pure_with(n, p, coupling, OVERSQUEEZE_QUOTED)
}

/// Stationary point for a general over-squeezing coefficient `c`:
/// `t*⁶ = P⁻² / (32 c N⁴ J⁶)`.
pub fn optimal_time_pure_with(n: usize, p: f64, coupling: f64, oversqueeze: f64) -> Result<PureOptimum> {
    check_polarization(p)?;
    if n == 0 {
        return Err(Error::Domain("optimal time needs at least one spin".into()));
    }
    if !(coupling > 0.0) || !(oversqueeze > 0.0) {
        return Err(Error::Domain(format!(
            "optimal time needs J > 0 and a positive over-squeezing coefficient (J = {coupling})"
        )));
    }
    let nn = n as f64;
    let t_star = (1.0 / (p * p * 32.0 * oversqueeze * nn.powi(4))).powf(1.0 / 6.0) / coupling;
    let xi2 = xi2_min_approx_with(n, p, coupling, t_star, oversqueeze)?;
    Ok(PureOptimum { t_star, xi2 })
}

/// Quoted forms kept to quantify how far they sit from the exact results.
pub mod quoted {
    use super::*;

    /// Quadrature ratio with the quoted normalization (correlation terms
    /// doubled, opposite shear sign, `cos^{N−2}` denominator).
    pub fn xi2_theta(n: usize, p: f64, theta0: f64, theta: QuadratureAngle) -> Result<f64> {
        check_pair_count(n)?;
        check_polarization(p)?;
        let k = (n - 2) as f64;
        let c4 = cos_pow_positive(4.0 * theta0, k)?;
        let c8 = cos_pow_signed(8.0 * theta0, n - 2);
        let th = theta.radians();
        let m = (n - 1) as f64;
        let numerator = 1.0 - m * p * p * th.sin().powi(2) * (c8 - 1.0)
            + 2.0 * p * m * (2.0 * th).sin() * (4.0 * theta0).sin() * c4;
        Ok(numerator / (p * c4))
    }

    /// Quoted optimal time `3^{1/6} 2^{−5/3} P^{−1/3} / (J N^{1/3})`.
    pub fn optimal_time(n: usize, p: f64, coupling: f64) -> f64 {
        3f64.powf(1.0 / 6.0) * 2f64.powf(-5.0 / 3.0) * p.powf(-1.0 / 3.0) / (coupling * (n as f64).cbrt())
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use approx::assert_relative_eq;

    use super::*;

    fn q(t: f64) -> QuadratureAngle {
        QuadratureAngle::new(t)
    }

    #[test]
    fn coherent_state_is_unsqueezed() {
        for th in [0.0, 0.4, 1.3, 2.9] {
            assert_relative_eq!(xi2_theta_finite_polarization(10, 1.0, 0.0, q(th)).unwrap(), 1.0);
            assert_relative_eq!(xi2_theta_finite_polarization(10, 0.5, 0.0, q(th)).unwrap(), 2.0);
        }
    }

    #[test]
    fn domain_rejects_large_twist() {
        let err = xi2_theta_finite_polarization(6, 1.0, PI / 8.0 + 1e-3, q(0.1)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(xi2_theta_finite_polarization(1, 1.0, 0.01, q(0.1)).is_err());
    }

    #[test]
    fn unsqueezed_minimum_convention() {
        let e = xi2_min_finite_polarization(7, 1.0, 0.0).unwrap();
        assert_eq!(e.theta_min, 0.0);
        assert_relative_eq!(e.xi2_min, 1.0);
        let e = xi2_min_finite_polarization(7, 0.25, 0.0).unwrap();
        assert_relative_eq!(e.xi2_min, 4.0);
    }

    #[test]
    fn closed_minimum_matches_grid_scan() {
        let (n, p, t0) = (6, 1.0, 0.05);
        let e = xi2_min_finite_polarization(n, p, t0).unwrap();
        let steps = 200_000;
        let (mut best, mut arg) = (f64::INFINITY, 0.0);
        for i in 0..steps {
            let th = PI * i as f64 / steps as f64;
            let v = xi2_theta_finite_polarization(n, p, t0, q(th)).unwrap();
            if v < best {
                best = v;
                arg = th;
            }
        }
        assert!((e.xi2_min - best).abs() < 1e-9, "{} vs {}", e.xi2_min, best);
        assert!((e.theta_min - arg).abs() < 2.0 * PI / steps as f64);
        let at_min = xi2_theta_finite_polarization(n, p, t0, q(e.theta_min)).unwrap();
        assert_relative_eq!(at_min, e.xi2_min, max_relative = 1e-12);
        let at_max = xi2_theta_finite_polarization(n, p, t0, q(e.theta_min + PI / 2.0)).unwrap();
        assert_relative_eq!(at_max, e.xi2_max, max_relative = 1e-12);
    }

    #[test]
    fn large_n_form_hand_value() {
        // 1/16 + (32/3)·1e-4
        let v = xi2_min_approx(100, 1.0, 1e-2, 1.0).unwrap();
        assert_relative_eq!(v, 0.0625 + 32.0 / 3.0 * 1e-4, max_relative = 1e-14);
        assert!((v - 0.0635667).abs() < 1e-7);
        assert!(matches!(xi2_min_approx(100, 1.0, 1e-2, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn large_n_form_grows_past_optimum() {
        let opt = optimal_time_pure(100, 1.0, 1.0).unwrap();
        let mut prev = opt.xi2;
        for k in 1..40 {
            let t = opt.t_star * (1.0 + 0.1 * k as f64);
            let v = xi2_min_approx(100, 1.0, 1.0, t).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn optimal_time_closed_form() {
        let opt = optimal_time_pure(1000, 1.0, 1.0).unwrap();
        let expected = 3f64.powf(1.0 / 6.0) / 2f64.powf(5.0 / 3.0) / 100.0;
        assert_relative_eq!(opt.t_star, expected, max_relative = 1e-14);
        // N^{-2/3}: eightfold N halves... quarters t*
        let a = optimal_time_pure(125, 0.7, 0.3).unwrap().t_star;
        let b = optimal_time_pure(1000, 0.7, 0.3).unwrap().t_star;
        assert_relative_eq!(b / a, 0.25, max_relative = 1e-12);
    }

    #[test]
    fn optimal_time_is_stationary() {
        for (n, p, j) in [(1000, 0.5, 1.0), (100, 1.0, 0.01), (5000, 0.2, 3.0)] {
            let opt = optimal_time_pure(n, p, j).unwrap();
            let h = 1e-6 * opt.t_star;
            let plus = xi2_min_approx(n, p, j, opt.t_star + h).unwrap();
            let minus = xi2_min_approx(n, p, j, opt.t_star - h).unwrap();
            let grad = (plus - minus) / (2.0 * h);
            assert!(grad.abs() < 1e-6 * opt.xi2 / opt.t_star, "grad {grad}");
        }
    }

    #[test]
    fn polarization_scaling_at_optimum() {
        let a = optimal_time_pure(400, 0.8, 1.0).unwrap().xi2;
        let b = optimal_time_pure(400, 0.1, 1.0).unwrap().xi2;
        assert_relative_eq!(b / a, 8f64.powf(7.0 / 3.0), max_relative = 1e-12);
    }

    #[test]
    fn exact_minimum_approaches_large_n_form() {
        // relative gap of the exact minimum to the large-N form shrinks like N^{-1/3}
        let mut prev = f64::INFINITY;
        for (n, tol) in [(1000usize, 0.10), (10_000, 0.05), (100_000, 0.02)] {
            let opt = optimal_time_pure_with(n, 1.0, 1.0, OVERSQUEEZE_LARGE_N).unwrap();
            let exact = xi2_min_finite_polarization(n, 1.0, opt.t_star).unwrap().xi2_min;
            let gap = (exact / opt.xi2 - 1.0).abs();
            assert!(gap < tol, "N={n}: gap {gap}");
            assert!(gap < prev);
            prev = gap;
        }
    }

    #[test]
    fn approx_angle_limits() {
        let (n, p, t0) = (30, 0.9, 0.01);
        let m = xi2_min_finite_polarization(n, p, t0).unwrap().xi2_min;
        assert_relative_eq!(xi2_theta_approx_angle(n, p, t0, q(8.0 * t0)).unwrap(), m, max_relative = 1e-14);
        let nn = n as f64;
        let span = 1.0 / p + 16.0 * (nn - 1.0) * (nn - 2.0) * p * t0 * t0 - m;
        assert_relative_eq!(
            xi2_theta_approx_angle(n, p, t0, q(8.0 * t0 + PI / 2.0)).unwrap(),
            m + 2.0 * span,
            max_relative = 1e-12
        );
    }

    #[test]
    fn quoted_form_differs_from_exact() {
        let exact = xi2_theta_finite_polarization(6, 1.0, 0.05, q(0.2)).unwrap();
        let quoted = quoted::xi2_theta(6, 1.0, 0.05, q(0.2)).unwrap();
        assert!((quoted - exact).abs() > 0.1);
        assert_relative_eq!(quoted::optimal_time(1000, 1.0, 1.0), 3f64.powf(1.0 / 6.0) / 2f64.powf(5.0 / 3.0) / 10.0);
    }

    #[test]
    fn signed_power_keeps_sign() {
        assert!(cos_pow_signed(2.0, 3) < 0.0);
        assert!(cos_pow_signed(2.0, 4) > 0.0);
        assert_relative_eq!(cos_pow_signed(2.0, 3), 2f64.cos().powi(3), max_relative = 1e-13);
    }
}
