use oat_core::analytic::{sensitivity, signal_to_noise, DenominatorCoefficient};
use oat_core::ProtocolParams;

use super::{evaluate, expand, sweep_cell, Point};
use crate::config::{Param, Params};
use crate::error::CliError;
use crate::output::{emit, Cell, Echo, Table};

pub const COLUMNS: [&str; 5] = ["Theta", "T", "snr_eq15", "sensitivity_eq16_derived_c", "sensitivity_eq16_paper_c"];

fn row(pt: &Point) -> Result<Vec<Cell>, CliError> {
    let ensemble = pt.ensemble()?;
    let rates = pt.rates()?;
    let proto = ProtocolParams::new(pt.j, pt.t, pt.b_y, pt.tau())?;
    let theta_big = rates.theta_big(pt.t);
    let snr = signal_to_noise(&ensemble, &rates, &proto)?;
    let derived = sensitivity(theta_big, pt.n, pt.p, &rates, pt.j, DenominatorCoefficient::Derived)?;
    let quoted = sensitivity(theta_big, pt.n, pt.p, &rates, pt.j, DenominatorCoefficient::Quoted)?;
    Ok([theta_big, pt.t, snr, derived, quoted].map(Cell::Float).to_vec())
}

pub fn run(params: &Params) -> Result<(), CliError> {
    let base = Point::resolve(params);
    let sweep = params.sweep()?;
    let points = expand(&base, sweep.as_ref())?;
    let extra = sweep.filter(|s| s.param != Param::T).map(|s| s.param);

    let mut columns: Vec<String> = extra.iter().map(|p| p.column()).collect();
    columns.extend(COLUMNS.iter().map(|c| c.to_string()));
    let rows = evaluate(&points, |pt| {
        let mut r: Vec<Cell> = extra.iter().map(|&p| sweep_cell(p, pt)).collect();
        r.extend(row(pt)?);
        Ok(r)
    })?;

    let mut echo = Echo::new("metrology");
    base.echo_physics(&mut echo);
    echo.push_opt("tau", base.tau).push("b-y", base.b_y).push_opt("sweep", params.sweep.clone());
    let table = Table { columns, rows };
    emit(params.out.as_deref(), &table.render(&echo, params.format())?)
}
