//! Deterministic bracketed 1-D optimizer.
//!
//! A 64-point log-spaced prescan picks the best grid cell, golden-section
//! search narrows it, and a bisection on the sign of a five-point derivative
//! stencil polishes the argument below the golden-section `√ε` floor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violations};

const PRESCAN_POINTS: usize = 64;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub abs_tol: f64,
    pub max_iters: usize,
    pub bracket: (f64, f64),
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-10, max_iters: 200, bracket: (1e-3, 20.0) }
    }
}

impl OptimizerConfig {
    pub fn with_bracket(lo: f64, hi: f64) -> Self {
        Self { bracket: (lo, hi), ..Self::default() }
    }

    pub fn violations(&self) -> Violations {
        let (lo, hi) = self.bracket;
        let mut v = Violations::new();
        v.check(lo > 0.0 && lo.is_finite(), "bracket", "0 < lo", lo);
        v.check(hi > lo && hi.is_finite(), "bracket", "lo < hi", hi);
        v.check(self.abs_tol > 0.0, "abs_tol", "abs_tol > 0", self.abs_tol);
        v.check(self.max_iters >= 1, "max_iters", "max_iters ≥ 1", self.max_iters as f64);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
}

struct Objective<F> {
    f: F,
    sign: f64,
}

impl<F: Fn(f64) -> f64> Objective<F> {
    /// Objective in minimization form.
    fn eval(&self, x: f64) -> Result<f64> {
        let y = (self.f)(x);
        if !y.is_finite() {
            return Err(Error::Numerical(format!("objective is not finite at x = {x}: {y}")));
        }
        Ok(self.sign * y)
    }

    fn slope(&self, x: f64, h: f64) -> Result<f64> {
        let a = self.eval(x - 2.0 * h)?;
        let b = self.eval(x - h)?;
        let c = self.eval(x + h)?;
        let d = self.eval(x + 2.0 * h)?;
        Ok((a - 8.0 * b + 8.0 * c - d) / (12.0 * h))
    }
}

/// Finds the extremum of `f` on `cfg.bracket`.
pub fn optimize_scalar<F: Fn(f64) -> f64>(f: F, cfg: &OptimizerConfig, sense: Sense) -> Result<Extremum> {
    cfg.violations().into_result()?;
    let obj = Objective { f, sign: if sense == Sense::Minimize { 1.0 } else { -1.0 } };
    let (lo, hi) = cfg.bracket;

    let ratio = (hi / lo).ln() / (PRESCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..PRESCAN_POINTS)
        .map(|i| match i {
            0 => lo,
            i if i == PRESCAN_POINTS - 1 => hi,
            i => lo * (ratio * i as f64).exp(),
        })
        .collect();
    let mut best = 0;
    let mut best_val = f64::INFINITY;
    for (i, &x) in grid.iter().enumerate() {
        let y = obj.eval(x)?;
        if y < best_val {
            best_val = y;
            best = i;
        }
    }
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(PRESCAN_POINTS - 1)];

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = obj.eval(c)?;
    let mut fd = obj.eval(d)?;
    let mut iters = 0;
    while b - a > cfg.abs_tol && iters < cfg.max_iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = obj.eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = obj.eval(d)?;
        }
        iters += 1;
    }
    let mut x = 0.5 * (a + b);

    // golden section stalls once function differences hit rounding; the
    // stencil slope keeps resolving the argument well below that
    let h = 1e-4 * x;
    let (min_x, max_x) = (lo + 2.0 * h, hi - 2.0 * h);
    let mut w = (b - a).max(1e-6 * x);
    for _ in 0..16 {
        let (l, r) = ((x - w).max(min_x), (x + w).min(max_x));
        if l >= r {
            break;
        }
        if obj.slope(l, h)? < 0.0 && obj.slope(r, h)? > 0.0 {
            let (mut l, mut r) = (l, r);
            let mut k = 0;
            while r - l > 0.25 * cfg.abs_tol && k < cfg.max_iters {
                let m = 0.5 * (l + r);
                if obj.slope(m, h)? < 0.0 {
                    l = m;
                } else {
                    r = m;
                }
                k += 1;
            }
            x = 0.5 * (l + r);
            break;
        }
        w *= 4.0;
    }

    Ok(Extremum { x, value: obj.sign * obj.eval(x)? })
}
