use std::f64::consts::PI;

use oat_core::analytic::{
    effective_field, optimize_scalar, sensitivity, xi2_theta_finite_polarization, DenominatorCoefficient,
    OptimizerConfig, Sense,
};
use oat_core::inhomogeneous::{xi2_theta_couplings, CouplingMatrix, PolarizationVector};
use oat_core::oracle::evolve_variable_coupling;
use oat_core::{DecoherenceRates, QuadratureAngle};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn uniform_closed_form_matches_oracle(n in 2usize..=7, p in 0.1f64..=1.0, theta0 in 0.001f64..0.3, th in 0.0f64..PI) {
        let m = evolve_variable_coupling(&CouplingMatrix::uniform(n, theta0).unwrap(), &PolarizationVector::uniform(n, p).unwrap()).unwrap();
        let th = QuadratureAngle::new(th);
        let exact = m.xi2(th).unwrap();
        let closed = xi2_theta_finite_polarization(n, p, theta0, th).unwrap();
        prop_assert!(((closed - exact) / exact).abs() < 1e-10, "{} vs {}", closed, exact);
    }

    #[test]
    fn random_couplings_match_oracle(
        upper in prop::collection::vec(-0.35f64..0.35, 10),
        pols in prop::collection::vec(0.2f64..=1.0, 5),
        th in 0.0f64..PI,
    ) {
        let c = CouplingMatrix::from_upper(5, &upper).unwrap();
        let p = PolarizationVector::new(pols).unwrap();
        let th = QuadratureAngle::new(th);
        let m = evolve_variable_coupling(&c, &p).unwrap();
        if let (Ok(a), Ok(b)) = (m.xi2(th), xi2_theta_couplings(&c, &p, th)) {
            prop_assert!(((a - b) / a).abs() < 1e-10);
        }
    }

    #[test]
    fn quadrature_angle_is_canonical(x in -50.0f64..50.0) {
        let a = QuadratureAngle::new(x).radians();
        prop_assert!((0.0..PI).contains(&a));
        let b = QuadratureAngle::new(x + PI).radians();
        prop_assert!((a - b).abs() < 1e-12 || (a - b).abs() > PI - 1e-12);
    }

    #[test]
    fn optimizer_finds_interior_quadratic_minimum(c in 0.2f64..8.0) {
        let e = optimize_scalar(|x| (x - c).powi(2) + 1.0, &OptimizerConfig::with_bracket(0.1, 10.0), Sense::Minimize).unwrap();
        prop_assert!((e.x - c).abs() < 1e-9);
    }

    #[test]
    fn effective_field_is_linear(b in -1e-3f64..1e-3, g in 0.0f64..0.5, t in 0.0f64..20.0) {
        let rates = DecoherenceRates::new(g, 0.5 * g).unwrap();
        let one = effective_field(b, &rates, t).unwrap();
        prop_assert_eq!(effective_field(2.0 * b, &rates, t).unwrap(), 2.0 * one);
        prop_assert!(one.abs() <= b.abs() * t + 1e-300);
    }

    #[test]
    fn larger_denominator_lowers_sensitivity(theta in 0.01f64..5.0, n in 10usize..10_000, j in 1e-6f64..1e-2) {
        let rates = DecoherenceRates::new(0.01, 0.02).unwrap();
        let derived = sensitivity(theta, n, 0.8, &rates, j, DenominatorCoefficient::Derived).unwrap();
        let quoted = sensitivity(theta, n, 0.8, &rates, j, DenominatorCoefficient::Quoted).unwrap();
        prop_assert!(derived <= quoted);
        prop_assert!(derived > 0.0);
    }
}
