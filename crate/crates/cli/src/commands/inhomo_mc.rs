use oat_core::analytic::xi2_min_finite_polarization;
use oat_core::inhomogeneous::{
    mean_xi2_analytic, monte_carlo_mean_xi2, suppression_report, DisorderSpec, PolarizationVector,
};
use oat_core::QuadratureAngle;
use serde_json::json;

use super::no_sweep;
use crate::config::{Format, Params};
use crate::error::CliError;
use crate::output::{emit, float17, json_string, Echo};

pub const DEFAULT_N: usize = 20;
pub const DEFAULT_SAMPLES: usize = 1000;

pub fn run(params: &Params, angle: Option<f64>) -> Result<(), CliError> {
    no_sweep(params, "inhomo-mc")?;
    let n = params.n.unwrap_or(DEFAULT_N);
    let p = params.p.unwrap_or(super::DEFAULT_P);
    let theta0 = params.theta0.unwrap_or(super::DEFAULT_THETA0);
    let samples = params.samples.unwrap_or(DEFAULT_SAMPLES);
    let seed = params.resolved_seed()?;
    if samples == 0 {
        return Err(CliError::Validation("samples must be at least 1".into()));
    }
    let spec = DisorderSpec::new(theta0, params.alpha, params.kappa, samples, seed)?;
    let pols = PolarizationVector::uniform(n, p)?;
    let angle = match angle {
        Some(a) => QuadratureAngle::new(a),
        None => QuadratureAngle::new(xi2_min_finite_polarization(n, p, theta0)?.theta_min),
    };

    let mc = monte_carlo_mean_xi2(&spec, &pols, angle)?;
    // the disorder average is derived for fully polarized spins
    let analytic = if p == 1.0 { Some(mean_xi2_analytic(&spec, n, angle, false)?) } else { None };
    let z_score = analytic.and_then(|a| {
        if mc.standard_error > 0.0 {
            Some((mc.mean - a) / mc.standard_error)
        } else if (mc.mean - a).abs() <= 1e-12 * a.abs().max(1.0) {
            Some(0.0)
        } else {
            None
        }
    });
    let suppression = suppression_report(&spec, n)?;

    let mut echo = Echo::new("inhomo-mc");
    echo.push("n", n)
        .push("p", p)
        .push("theta0", theta0)
        .push_opt("kappa", params.kappa)
        .push_opt("alpha", params.alpha)
        .push("samples", samples)
        .push("seed", seed)
        .push("angle", angle.radians());

    let summary = json!({
        "parameters": echo.to_json(),
        "mean": mc.mean,
        "stderr": mc.standard_error,
        "analytic_eq40": analytic,
        "z_score": z_score,
        "suppression_factors": {
            "exp_factor_pair": suppression.exp_factor_pair,
            "exp_factor_single": suppression.exp_factor_single,
            "negligible": suppression.negligible,
        },
        "n_rejected": mc.n_rejected,
        "seed": seed,
    });
    let summary_text = json_string(&summary)?;

    match params.format() {
        Format::Json => emit(params.out.as_deref(), &summary_text),
        Format::Csv => {
            let mut csv = echo.header();
            csv.push_str("sample_index,xi2\n");
            for (i, v) in mc.samples.iter().enumerate() {
                if let Some(v) = v {
                    csv.push_str(&format!("{i},{}\n", float17(*v)));
                }
            }
            csv.push_str(&format!("# mean = {}\n", float17(mc.mean)));
            csv.push_str(&format!("# stderr = {}\n", float17(mc.standard_error)));
            if let Some(a) = analytic {
                csv.push_str(&format!("# analytic_eq40 = {}\n", float17(a)));
            }
            if let Some(z) = z_score {
                csv.push_str(&format!("# z_score = {}\n", float17(z)));
            }
            csv.push_str(&format!("# n_rejected = {}\n", mc.n_rejected));
            emit(params.out.as_deref(), &csv)?;
            if let Some(out) = &params.out {
                emit(Some(&out.with_extension("summary.json")), &summary_text)?;
            }
            Ok(())
        }
    }
}
