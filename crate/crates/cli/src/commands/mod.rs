pub mod inhomo_mc;
pub mod metrology;
pub mod optimal_point;
pub mod squeeze_curve;
pub mod verify;

use oat_core::{DecoherenceRates, EnsembleParams};
use rayon::prelude::*;

use crate::config::{Param, Params, Sweep};
use crate::error::CliError;
use crate::output::{Cell, Echo};

/// Fallback values used when neither a flag nor the config file sets them.
pub const DEFAULT_N: usize = 100;
pub const DEFAULT_P: f64 = 1.0;
pub const DEFAULT_J: f64 = 1e-4;
pub const DEFAULT_GAMMA: f64 = 0.01;
pub const DEFAULT_T: f64 = 1.0;
pub const DEFAULT_B_Y: f64 = 1e-6;
pub const DEFAULT_THETA0: f64 = 0.05;

/// One fully resolved parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub n: usize,
    pub p: f64,
    pub j: f64,
    pub gamma_par: f64,
    pub gamma_perp: f64,
    pub t: f64,
    /// Unset means `τ = T`, so a swept `T` carries `τ` along.
    pub tau: Option<f64>,
    pub b_y: f64,
    pub theta0: f64,
    pub kappa: Option<f64>,
    pub alpha: Option<f64>,
}

impl Point {
    pub fn resolve(params: &Params) -> Self {
        Self {
            n: params.n.unwrap_or(DEFAULT_N),
            p: params.p.unwrap_or(DEFAULT_P),
            j: params.j.unwrap_or(DEFAULT_J),
            gamma_par: params.gamma_par.unwrap_or(DEFAULT_GAMMA),
            gamma_perp: params.gamma_perp.unwrap_or(DEFAULT_GAMMA),
            t: params.t.unwrap_or(DEFAULT_T),
            tau: params.tau,
            b_y: params.b_y.unwrap_or(DEFAULT_B_Y),
            theta0: params.theta0.unwrap_or(DEFAULT_THETA0),
            kappa: params.kappa,
            alpha: params.alpha,
        }
    }

    pub fn set(&mut self, param: Param, v: f64) -> Result<(), CliError> {
        match param {
            Param::N => {
                if !(v >= 1.0) || !v.is_finite() {
                    return Err(CliError::Validation(format!("n must be at least 1, got {v}")));
                }
                self.n = v.round() as usize;
            }
            Param::P => self.p = v,
            Param::J => self.j = v,
            Param::GammaPar => self.gamma_par = v,
            Param::GammaPerp => self.gamma_perp = v,
            Param::T => self.t = v,
            Param::Tau => self.tau = Some(v),
            Param::BY => self.b_y = v,
            Param::Theta0 => self.theta0 = v,
            Param::Kappa => self.kappa = Some(v),
            Param::Alpha => self.alpha = Some(v),
        }
        Ok(())
    }

    pub fn get(&self, param: Param) -> f64 {
        match param {
            Param::N => self.n as f64,
            Param::P => self.p,
            Param::J => self.j,
            Param::GammaPar => self.gamma_par,
            Param::GammaPerp => self.gamma_perp,
            Param::T => self.t,
            Param::Tau => self.tau(),
            Param::BY => self.b_y,
            Param::Theta0 => self.theta0,
            Param::Kappa => self.kappa.unwrap_or(0.0),
            Param::Alpha => self.alpha.unwrap_or(f64::INFINITY),
        }
    }

    pub fn tau(&self) -> f64 {
        self.tau.unwrap_or(self.t)
    }

    pub fn ensemble(&self) -> Result<EnsembleParams, CliError> {
        Ok(EnsembleParams::new(self.n, self.p)?)
    }

    pub fn rates(&self) -> Result<DecoherenceRates, CliError> {
        Ok(DecoherenceRates::new(self.gamma_par, self.gamma_perp)?)
    }

    /// Echoes the core physical parameters.
    pub fn echo_physics(&self, echo: &mut Echo) {
        echo.push("n", self.n)
            .push("p", self.p)
            .push("j", self.j)
            .push("gamma-par", self.gamma_par)
            .push("gamma-perp", self.gamma_perp)
            .push("t", self.t);
    }
}

/// Cell for the swept parameter's own column.
pub fn sweep_cell(param: Param, point: &Point) -> Cell {
    match param {
        Param::N => Cell::Int(point.n as u64),
        other => Cell::Float(point.get(other)),
    }
}

/// Every point of the sweep, or just `base` without one.
pub fn expand(base: &Point, sweep: Option<&Sweep>) -> Result<Vec<Point>, CliError> {
    let Some(s) = sweep else {
        return Ok(vec![base.clone()]);
    };
    s.values()
        .into_iter()
        .map(|v| {
            let mut p = base.clone();
            p.set(s.param, v)?;
            Ok(p)
        })
        .collect()
}

/// Evaluates `f` on every point concurrently, keeping the input order.
pub fn evaluate<T: Send>(
    points: &[Point],
    f: impl Fn(&Point) -> Result<T, CliError> + Sync + Send,
) -> Result<Vec<T>, CliError> {
    points.par_iter().map(f).collect()
}

pub fn no_sweep(params: &Params, command: &str) -> Result<(), CliError> {
    if params.sweep.is_some() {
        return Err(CliError::Validation(format!("{command} does not take --sweep")));
    }
    Ok(())
}
