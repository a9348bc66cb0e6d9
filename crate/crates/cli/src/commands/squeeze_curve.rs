use oat_core::analytic::{effective_polarization, xi2_min_approx, xi2_min_decoherence, xi2_min_finite_polarization};

use super::{evaluate, expand, sweep_cell, Point};
use crate::config::{Param, Params};
use crate::error::CliError;
use crate::output::{emit, Cell, Echo, Table};

pub const COLUMNS: [&str; 6] = ["T", "Theta", "xi2_eq6", "xi2_pure_eq50", "effective_polarization", "theta_min_angle"];

fn row(pt: &Point) -> Result<Vec<Cell>, CliError> {
    pt.ensemble()?;
    let rates = pt.rates()?;
    let xi2 = xi2_min_decoherence(pt.n, pt.p, &rates, pt.j, pt.t)?;
    let pure = xi2_min_approx(pt.n, pt.p, pt.j, pt.t)?;
    let pe = effective_polarization(pt.p, &rates, pt.t)?;
    let angle = if pt.n >= 2 { xi2_min_finite_polarization(pt.n, pe, pt.j * pt.t)?.theta_min } else { 0.0 };
    Ok([pt.t, rates.theta_big(pt.t), xi2, pure, pe, angle].map(Cell::Float).to_vec())
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

    let mut echo = Echo::new("squeeze-curve");
    base.echo_physics(&mut echo);
    echo.push_opt("sweep", params.sweep.clone());
    let table = Table { columns, rows };
    emit(params.out.as_deref(), &table.render(&echo, params.format())?)
}
