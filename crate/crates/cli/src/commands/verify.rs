use oat_core::oracle::MAX_SPINS;
use oat_core::verify::{
    appendix_b_suite, appendix_c_suite, constants_suite, factorization_suite, kraus_suite, lindblad_suite,
    metrology_suite, AppendixBOptions, AppendixCOptions, FactorizationOptions, KrausOptions, LindbladOptions,
    MetrologyOptions, Suite, VerifyReport,
};
use oat_core::{DecoherenceRates, EnsembleParams};
use serde_json::{json, Map, Value};

use super::no_sweep;
use crate::config::{parse_n_range, Format, Params};
use crate::error::CliError;
use crate::output::{emit, float17, json_string, Echo};

/// Spin counts requested through `--n` or `--n-range`.
fn spin_counts(params: &Params, range: Option<(usize, usize)>) -> Result<Option<Vec<usize>>, CliError> {
    let counts: Option<Vec<usize>> = match (params.n, range) {
        (_, Some((a, b))) => Some((a..=b).collect()),
        (Some(n), None) => Some(vec![n]),
        (None, None) => None,
    };
    if let Some(c) = &counts {
        if let Some(&big) = c.iter().find(|&&n| n > MAX_SPINS) {
            return Err(CliError::Validation(format!(
                "the exact oracle supports at most {MAX_SPINS} spins, got {big}"
            )));
        }
        if c.contains(&0) {
            return Err(CliError::Validation("spin counts must be at least 1".into()));
        }
    }
    Ok(counts)
}

fn rates(params: &Params, default: DecoherenceRates) -> Result<DecoherenceRates, CliError> {
    Ok(DecoherenceRates::new(
        params.gamma_par.unwrap_or(default.gamma_par),
        params.gamma_perp.unwrap_or(default.gamma_perp),
    )?)
}

fn run_suite(suite: Suite, params: &Params, range: Option<(usize, usize)>) -> Result<VerifyReport, CliError> {
    let counts = spin_counts(params, range)?;
    let report = match suite {
        Suite::Lindblad => {
            let d = LindbladOptions::default();
            let opts = LindbladOptions {
                n_values: counts.unwrap_or(d.n_values.clone()),
                polarization: params.p.unwrap_or(d.polarization),
                rates: rates(params, d.rates)?,
                coupling: params.j.unwrap_or(d.coupling),
                squeeze_time: params.t.unwrap_or(d.squeeze_time),
                ..d
            };
            lindblad_suite(&opts)?
        }
        Suite::Factorization => {
            let d = FactorizationOptions::default();
            let (n_min, n_max) = match &counts {
                Some(c) => (c[0], *c.last().unwrap_or(&c[0])),
                None => (d.n_min, d.n_max),
            };
            let mut point = d.point;
            point.polarization = params.p.unwrap_or(point.polarization);
            point.squeeze_time = params.t.unwrap_or(point.squeeze_time);
            factorization_suite(&FactorizationOptions { n_min, n_max, point, ..d })?
        }
        Suite::AppendixB => {
            let d = AppendixBOptions::default();
            let n_max = counts.as_ref().and_then(|c| c.last().copied()).unwrap_or(d.n_max);
            let n_min = counts.as_ref().map(|c| c[0].clamp(2, n_max.max(2))).unwrap_or(d.n_min);
            appendix_b_suite(&AppendixBOptions {
                n_instances: params.samples.unwrap_or(d.n_instances),
                n_min,
                n_max,
                seed: params.seed.unwrap_or(d.seed),
                ..d
            })?
        }
        Suite::AppendixC => {
            let d = AppendixCOptions::default();
            appendix_c_suite(&AppendixCOptions {
                n_values: counts.unwrap_or(d.n_values.clone()),
                polarizations: params.p.map(|p| vec![p]).unwrap_or(d.polarizations.clone()),
                theta0s: params.theta0.map(|t| vec![t]).unwrap_or(d.theta0s.clone()),
                ..d
            })?
        }
        Suite::Kraus => {
            let d = KrausOptions::default();
            let partial = match params.p {
                Some(p) if p < 1.0 => vec![p],
                _ => d.partial_polarizations.clone(),
            };
            kraus_suite(&KrausOptions {
                n_values: counts.unwrap_or(d.n_values.clone()),
                theta0: params.theta0.unwrap_or(d.theta0),
                partial_polarizations: partial,
                ..d
            })?
        }
        Suite::MetrologyOracle => {
            let d = MetrologyOptions::default();
            let n = counts.map(|c| c[0]).unwrap_or(d.ensemble.n_spins);
            metrology_suite(&MetrologyOptions {
                ensemble: EnsembleParams::new(n, params.p.unwrap_or(d.ensemble.polarization))?,
                rates: rates(params, d.rates)?,
                coupling: params.j.unwrap_or(d.coupling),
                squeeze_time: params.t.unwrap_or(d.squeeze_time),
                ..d
            })?
        }
        Suite::Constants => constants_suite()?,
    };
    Ok(report)
}

fn report_json(report: &VerifyReport) -> Result<Value, CliError> {
    serde_json::to_value(report).map_err(|e| CliError::Failure(format!("json encoding failed: {e}")))
}

fn report_csv(reports: &[VerifyReport], echo: &Echo) -> String {
    let mut s = echo.header();
    s.push_str("suite,check,measured,tolerance,pass\n");
    for r in reports {
        for c in &r.checks {
            let tol = c.tolerance.map(float17).unwrap_or_default();
            s.push_str(&format!(
                "{},\"{}\",{},{},{}\n",
                r.suite,
                c.name.replace('"', "'"),
                float17(c.measured),
                tol,
                c.pass
            ));
        }
    }
    s
}

pub fn run(params: &Params, suite: Option<&str>, n_range: Option<&str>) -> Result<(), CliError> {
    no_sweep(params, "verify")?;
    let name = suite.ok_or_else(|| CliError::Validation("verify needs a suite name".into()))?;
    let suites: Vec<Suite> =
        if name == "all" { Suite::ALL.to_vec() } else { vec![name.parse::<Suite>().map_err(CliError::Validation)?] };
    let range = n_range.map(parse_n_range).transpose()?;
    let reports = suites.iter().map(|&s| run_suite(s, params, range)).collect::<Result<Vec<_>, _>>()?;
    let pass = reports.iter().all(|r| r.pass);

    let mut echo = Echo::new("verify");
    echo.push("suite", name)
        .push_opt("n", params.n)
        .push_opt("n-range", n_range)
        .push_opt("p", params.p)
        .push_opt("j", params.j)
        .push_opt("gamma-par", params.gamma_par)
        .push_opt("gamma-perp", params.gamma_perp)
        .push_opt("t", params.t)
        .push_opt("theta0", params.theta0)
        .push_opt("samples", params.samples)
        .push_opt("seed", params.seed);

    let text = match params.format.unwrap_or(Format::Json) {
        Format::Csv => report_csv(&reports, &echo),
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("parameters".into(), echo.to_json());
            doc.insert("pass".into(), json!(pass));
            if let [single] = reports.as_slice() {
                if let Value::Object(m) = report_json(single)? {
                    doc.extend(m);
                }
            } else {
                let all = reports.iter().map(report_json).collect::<Result<Vec<_>, _>>()?;
                doc.insert("reports".into(), Value::Array(all));
            }
            json_string(&Value::Object(doc))?
        }
    };
    emit(params.out.as_deref(), &text)?;

    if pass {
        return Ok(());
    }
    let failing: Vec<String> = reports
        .iter()
        .flat_map(|r| r.failing().map(move |c| format!("{}: {} (measured {:e})", r.suite, c.name, c.measured)))
        .collect();
    Err(CliError::Failure(format!("verification failed: {}", failing.join("; "))))
}
