use std::f64::consts::PI;

use approx::assert_relative_eq;
use oat_core::analytic::{effective_field, signal_to_noise, xi2_after_dephasing_exact, xi2_theta_finite_polarization};
use oat_core::inhomogeneous::{pair_moments, xi2_theta_couplings, CouplingMatrix, PolarizationVector};
use oat_core::oracle::{
    apply_dephasing, apply_dephasing_closed, build_initial_state, evolve, evolve_variable_coupling, evolve_with,
    simulate_metrology, trace_distance, twisted_state, CollectiveMoments, Generator, IntegratorConfig, Terms,
};
use oat_core::{DecoherenceRates, EnsembleParams, ProtocolParams, QuadratureAngle};

#[test]
fn two_spin_pair_convention_matches_unitary_twist() {
    // each unordered pair carries 2J, so theta0 = J·T in the unitary picture
    let (j, t) = (0.07, 1.5);
    let e = EnsembleParams::new(2, 0.8).unwrap();
    let rho = build_initial_state(&e).unwrap();
    let cfg = IntegratorConfig::new(0.001, t);
    let gen = Generator::new(2, &DecoherenceRates::none(), j, 0.0, Terms::SQUEEZING).unwrap();
    let lindblad = evolve_with(&rho, &cfg, &gen).unwrap().final_state;
    let unitary =
        twisted_state(&CouplingMatrix::uniform(2, j * t).unwrap(), &PolarizationVector::uniform(2, 0.8).unwrap())
            .unwrap();
    assert!(trace_distance(&lindblad, &unitary).unwrap() < 1e-12);
}

#[test]
fn lindblad_without_decay_reproduces_closed_form() {
    let (n, t) = (4, 2.0);
    let theta0 = 0.05;
    let e = EnsembleParams::new(n, 1.0).unwrap();
    let proto = ProtocolParams::squeezing(theta0 / t, t).unwrap();
    let traj = evolve(
        &build_initial_state(&e).unwrap(),
        &IntegratorConfig::new(0.005, t),
        &e,
        &DecoherenceRates::none(),
        &proto,
    )
    .unwrap();
    let m = &traj.last().moments;
    for k in 0..12 {
        let th = QuadratureAngle::new(PI * k as f64 / 12.0);
        assert_relative_eq!(
            m.xi2(th).unwrap(),
            xi2_theta_finite_polarization(n, 1.0, theta0, th).unwrap(),
            max_relative = 1e-10
        );
    }
}

#[test]
fn decay_only_matches_exponential() {
    let e = EnsembleParams::new(3, 0.7).unwrap();
    let rates = DecoherenceRates::new(0.04, 0.01).unwrap();
    let mut cfg = IntegratorConfig::new(0.01, 3.0);
    cfg.checkpoint_every = 50;
    let gen = Generator::new(3, &rates, 0.0, 0.0, Terms::SQUEEZING).unwrap();
    let traj = evolve_with(&build_initial_state(&e).unwrap(), &cfg, &gen).unwrap();
    for c in &traj.checkpoints {
        assert_relative_eq!(
            c.moments.mean_z() / 3.0,
            0.7 * (-2.0 * rates.gamma_sum() * c.t).exp(),
            max_relative = 1e-10
        );
    }
}

#[test]
fn halving_the_step_changes_little() {
    let e = EnsembleParams::new(5, 0.9).unwrap();
    let rates = DecoherenceRates::new(0.03, 0.02).unwrap();
    let proto = ProtocolParams::squeezing(0.04, 2.0).unwrap();
    let rho = build_initial_state(&e).unwrap();
    let th = QuadratureAngle::new(0.4);
    let run = |dt| {
        let mut cfg = IntegratorConfig::new(dt, 2.0);
        cfg.angles = vec![th.radians()];
        evolve(&rho, &cfg, &e, &rates, &proto).unwrap().last().second_moments[0]
    };
    let (coarse, fine) = (run(0.01), run(0.005));
    assert!(((coarse - fine) / fine).abs() < 1e-8);
}

#[test]
fn dephasing_channel_and_closed_form_agree_on_squeezed_states() {
    let rho = twisted_state(&CouplingMatrix::uniform(5, 0.06).unwrap(), &PolarizationVector::uniform(5, 0.85).unwrap())
        .unwrap();
    for s in [0.0, 0.25, 0.9, 1.0] {
        let a = apply_dephasing(&rho, s).unwrap();
        let b = apply_dephasing_closed(&rho, s).unwrap();
        assert!(trace_distance(&a, &b).unwrap() < 1e-13);
        assert!((a.trace().re - 1.0).abs() < 1e-13);
        assert!(a.min_eigenvalue() > -1e-12);

        let (m0, m) = (CollectiveMoments::from_state(&rho), CollectiveMoments::from_state(&a));
        let pm = m0.mean_z() / 5.0;
        for th in [0.1, 0.7, 1.9] {
            let th = QuadratureAngle::new(th);
            assert!(
                (xi2_after_dephasing_exact(m0.xi2(th).unwrap(), pm, s).unwrap() - m.xi2(th).unwrap()).abs() < 1e-10
            );
        }
    }
}

#[test]
fn inhomogeneous_closed_form_matches_oracle() {
    let upper = [0.11, -0.05, 0.2, 0.03, 0.07, -0.12];
    let c = CouplingMatrix::from_upper(4, &upper).unwrap();
    let p = PolarizationVector::new(vec![0.9, 0.6, 1.0, 0.75]).unwrap();
    let m = evolve_variable_coupling(&c, &p).unwrap();
    let closed = pair_moments(&c, &p).unwrap();
    for k in 0..4 {
        assert!((m.bloch[k][2] - closed.mean_z[k]).abs() < 1e-13);
        for l in (0..4).filter(|&l| l != k) {
            assert!((m.pair(k, l).yy - closed.yy[k * 4 + l]).abs() < 1e-13);
            assert!((m.pair(k, l).xy - closed.xy[k * 4 + l]).abs() < 1e-13);
        }
    }
    for th in [0.0, 0.3, 1.2, 2.8] {
        let th = QuadratureAngle::new(th);
        assert_relative_eq!(m.xi2(th).unwrap(), xi2_theta_couplings(&c, &p, th).unwrap(), max_relative = 1e-12);
    }
}

#[test]
fn free_rotation_is_close_to_effective_field() {
    let e = EnsembleParams::new(1, 1.0).unwrap();
    let rates = DecoherenceRates::new(0.02, 0.03).unwrap();
    let proto = ProtocolParams::new(0.0, 2.0, 1e-6, 2.0).unwrap();
    let est = simulate_metrology(&e, &rates, &proto, &IntegratorConfig::new(0.01, 2.0)).unwrap();
    let angle = est.slope_x / (2.0 * est.mean_z);
    let ratio = angle / effective_field(1.0, &rates, 2.0).unwrap();
    // x decays at 4Γ⊥ but z at 2Γs; the linear-response field ignores that
    assert!((ratio - 1.0).abs() < 0.1, "{ratio}");
}

#[test]
fn oracle_snr_within_factor_two_of_closed_form() {
    let e = EnsembleParams::new(6, 1.0).unwrap();
    let rates = DecoherenceRates::new(0.02, 0.03).unwrap();
    let proto = ProtocolParams::new(0.05, 2.0, 1e-6, 2.0).unwrap();
    let est = simulate_metrology(&e, &rates, &proto, &IntegratorConfig::new(0.01, 2.0)).unwrap();
    let ratio = est.snr_estimate / signal_to_noise(&e, &rates, &proto).unwrap();
    assert!((0.5..=2.0).contains(&ratio), "{ratio}");
}
