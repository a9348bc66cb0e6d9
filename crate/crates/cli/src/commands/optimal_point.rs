use oat_core::analytic::{max_sensitivity, squeezing_optimum, DenominatorCoefficient, OptimizerConfig};
use serde_json::{json, Map, Value};

use super::{evaluate, expand, Point};
use crate::config::{Params, Target};
use crate::error::CliError;
use crate::output::{emit, json_string, Echo};

fn regime_flag(r: oat_core::Regime) -> Value {
    serde_json::to_value(r).unwrap_or(Value::Null)
}

fn reference_constants() -> Value {
    json!({ "theta_min": 0.6667, "theta_max": oat_core::reference::THETA_MAX })
}

fn squeeze(pt: &Point) -> Result<Map<String, Value>, CliError> {
    let ensemble = pt.ensemble()?;
    let rates = pt.rates()?;
    let report = squeezing_optimum(&ensemble, &rates, pt.j, &OptimizerConfig::default())?;
    let gs = rates.gamma_sum();
    let (theta_star, t_star) = if gs > 0.0 {
        (report.optimal_time_or_theta, report.optimal_time_or_theta / (2.0 * gs))
    } else {
        (0.0, report.optimal_time_or_theta)
    };
    let mut m = Map::new();
    m.insert("target".into(), json!("squeeze"));
    m.insert("theta_star".into(), json!(theta_star));
    m.insert("t_star".into(), json!(t_star));
    m.insert("xi2_min".into(), json!(report.xi2_min));
    m.insert("theta_min_angle".into(), json!(report.theta_min));
    m.insert("effective_polarization".into(), json!(report.effective_polarization));
    m.insert("regime_flag".into(), regime_flag(report.regime));
    Ok(m)
}

fn metrology(pt: &Point) -> Result<Map<String, Value>, CliError> {
    let ensemble = pt.ensemble()?;
    let rates = pt.rates()?;
    let cfg = OptimizerConfig::default();
    let best = max_sensitivity(&ensemble, &rates, pt.j, DenominatorCoefficient::Derived, &cfg)?;
    let quoted = max_sensitivity(&ensemble, &rates, pt.j, DenominatorCoefficient::Quoted, &cfg)?;
    let mut m = Map::new();
    m.insert("target".into(), json!("metrology"));
    m.insert("theta_star".into(), json!(best.theta_star));
    m.insert("t_star".into(), json!(best.theta_star / (2.0 * rates.gamma_sum())));
    m.insert("sensitivity_star".into(), json!(best.sensitivity_star));
    m.insert("oversqueezing_correction".into(), json!(best.correction));
    m.insert("theta_star_paper_c".into(), json!(quoted.theta_star));
    m.insert("sensitivity_star_paper_c".into(), json!(quoted.sensitivity_star));
    m.insert("regime_flag".into(), regime_flag(best.regime));
    Ok(m)
}

pub fn run(params: &Params, target: Target) -> Result<(), CliError> {
    let base = Point::resolve(params);
    let sweep = params.sweep()?;
    let points = expand(&base, sweep.as_ref())?;
    let eval = |pt: &Point| match target {
        Target::Squeeze => squeeze(pt),
        Target::Metrology => metrology(pt),
    };

    let mut echo = Echo::new("optimal-point");
    base.echo_physics(&mut echo);
    echo.push_opt("sweep", params.sweep.clone());

    let mut doc = Map::new();
    doc.insert("parameters".into(), echo.to_json());
    match sweep {
        None => doc.extend(eval(&base)?),
        Some(s) => {
            let rows = evaluate(&points, |pt| {
                let mut m = Map::new();
                m.insert(s.param.column(), json!(pt.get(s.param)));
                m.extend(eval(pt)?);
                Ok(Value::Object(m))
            })?;
            doc.insert("points".into(), Value::Array(rows));
        }
    }
    doc.insert("paper_reference_constants".into(), reference_constants());
    emit(params.out.as_deref(), &json_string(&Value::Object(doc))?)
}
