//! Dense Lindblad integration.
//!
//! Generator: `ℒ(ρ) = −i[H, ρ] + Σ_i (Γ∥ X_iρX_i + Γ⊥(Z_iρZ_i + Y_iρY_i)) − N(Γ∥ + 2Γ⊥)ρ`
//! with `H = J Σ_{i≠j} X_iX_j + B_y Σ_i Y_i`. Each unordered pair carries `2J`.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violations};
use crate::oracle::density::{check_cap, DensityMatrix};
use crate::oracle::moments::CollectiveMoments;
use crate::params::{DecoherenceRates, EnsembleParams, ProtocolParams, QuadratureAngle};

const HERMITIZE_EVERY: usize = 100;
const POSITIVITY_TOL: f64 = -1e-10;

/// Which parts of the generator are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Terms {
    pub hamiltonian: bool,
    pub dissipation: bool,
    pub signal: bool,
}

impl Terms {
    pub const ALL: Terms = Terms { hamiltonian: true, dissipation: true, signal: true };
    pub const SQUEEZING: Terms = Terms { hamiltonian: true, dissipation: true, signal: false };
    pub const HAMILTONIAN: Terms = Terms { hamiltonian: true, dissipation: false, signal: false };
    pub const DISSIPATION: Terms = Terms { hamiltonian: false, dissipation: true, signal: false };
}

/// Time-independent Lindblad generator for `n_spins` spins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generator {
    pub n_spins: usize,
    pub coupling: f64,
    pub gamma_par: f64,
    pub gamma_perp: f64,
    pub signal_field: f64,
}

impl Generator {
    pub fn new(
        n_spins: usize,
        rates: &DecoherenceRates,
        coupling: f64,
        signal_field: f64,
        terms: Terms,
    ) -> Result<Self> {
        check_cap(n_spins)?;
        rates.validate()?;
        let mut v = Violations::new();
        v.check(coupling.is_finite(), "coupling", "coupling finite", coupling);
        v.check(signal_field.is_finite(), "signal_field", "signal_field finite", signal_field);
        v.into_result()?;
        Ok(Self {
            n_spins,
            coupling: if terms.hamiltonian { coupling } else { 0.0 },
            gamma_par: if terms.dissipation { rates.gamma_par } else { 0.0 },
            gamma_perp: if terms.dissipation { rates.gamma_perp } else { 0.0 },
            signal_field: if terms.signal { signal_field } else { 0.0 },
        })
    }

    pub fn from_params(
        ensemble: &EnsembleParams,
        rates: &DecoherenceRates,
        proto: &ProtocolParams,
        terms: Terms,
    ) -> Result<Self> {
        ensemble.validate()?;
        proto.validate()?;
        Self::new(ensemble.n_spins, rates, proto.coupling, proto.signal_field, terms)
    }

    /// Writes `ℒ(ρ)` into `out`, using `scratch` for `Σ_i X_i ρ` and `ρ Σ_i X_i`.
    fn apply(&self, rho: &[Complex64], out: &mut [Complex64], scratch: &mut Scratch) {
        let n = self.n_spins;
        let dim = 1usize << n;
        let (j, gpar, gperp, b) = (self.coupling, self.gamma_par, self.gamma_perp, self.signal_field);
        let loss = n as f64 * (gpar + 2.0 * gperp);
        if j != 0.0 {
            let (left, right) = (&mut scratch.left, &mut scratch.right);
            left.par_chunks_mut(dim).zip(right.par_chunks_mut(dim)).enumerate().for_each(|(a, (lrow, rrow))| {
                for bb in 0..dim {
                    let (mut l, mut r) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
                    for i in 0..n {
                        let m = 1usize << i;
                        l += rho[(a ^ m) * dim + bb];
                        r += rho[a * dim + (bb ^ m)];
                    }
                    lrow[bb] = l;
                    rrow[bb] = r;
                }
            });
        }
        let (left, right) = (&scratch.left, &scratch.right);
        let minus_i = Complex64::new(0.0, -1.0);
        out.par_chunks_mut(dim).enumerate().for_each(|(a, row)| {
            for bb in 0..dim {
                let idx = a * dim + bb;
                let mut acc = Complex64::new(0.0, 0.0);
                if j != 0.0 {
                    // [S_x², ρ] with S_x = Σ X_i; the −N𝕀 part of H cancels
                    let mut comm = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        let m = 1usize << i;
                        comm += left[(a ^ m) * dim + bb] - right[a * dim + (bb ^ m)];
                    }
                    acc += minus_i * j * comm;
                }
                if b != 0.0 {
                    // (Y_iρ)_ab = −i(−1)^{a_i} ρ_{a⊕m,b},  (ρY_i)_ab = i(−1)^{b_i} ρ_{a,b⊕m}
                    let mut comm = Complex64::new(0.0, 0.0);
                    for i in 0..n {
                        let m = 1usize << i;
                        let sa = if a & m == 0 { 1.0 } else { -1.0 };
                        let sb = if bb & m == 0 { 1.0 } else { -1.0 };
                        comm += sa * rho[(a ^ m) * dim + bb] + sb * rho[a * dim + (bb ^ m)];
                    }
                    // −i[BΣY_i, ρ] = −iB·(−i)·comm
                    acc += -b * comm;
                }
                if gpar != 0.0 || gperp != 0.0 {
                    let mut d = -loss * rho[idx];
                    for i in 0..n {
                        let m = 1usize << i;
                        let flipped = rho[(a ^ m) * dim + (bb ^ m)];
                        let zz = if ((a ^ bb) & m) == 0 { 1.0 } else { -1.0 };
                        d += gpar * flipped + gperp * zz * (rho[idx] + flipped);
                    }
                    acc += d;
                }
                row[bb] = acc;
            }
        });
    }
}

struct Scratch {
    left: Vec<Complex64>,
    right: Vec<Complex64>,
}

impl Scratch {
    fn new(len: usize) -> Self {
        Self { left: vec![Complex64::new(0.0, 0.0); len], right: vec![Complex64::new(0.0, 0.0); len] }
    }
}

/// `ℒ(ρ)` for the given parameters; the signal term is added when requested.
pub fn lindblad_rhs(
    rho: &DensityMatrix,
    ensemble: &EnsembleParams,
    rates: &DecoherenceRates,
    proto: &ProtocolParams,
    include_signal: bool,
) -> Result<DensityMatrix> {
    let terms = Terms { signal: include_signal, ..Terms::SQUEEZING };
    let gen = Generator::from_params(ensemble, rates, proto, terms)?;
    apply_generator(&gen, rho)
}

pub fn apply_generator(gen: &Generator, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.n_spins() != gen.n_spins {
        return Err(Error::Domain(format!("state has {} spins, generator {}", rho.n_spins(), gen.n_spins)));
    }
    let len = rho.as_slice().len();
    let mut out = DensityMatrix::zeros(gen.n_spins)?;
    gen.apply(rho.as_slice(), out.as_mut_slice(), &mut Scratch::new(len));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_final: f64,
    /// Record a checkpoint every this many steps (the final time is always recorded).
    pub checkpoint_every: usize,
    /// Compute the minimum eigenvalue at every checkpoint.
    pub check_positivity: bool,
    /// Quadrature angles whose second moments are recorded at checkpoints.
    pub angles: Vec<f64>,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_final: f64) -> Self {
        Self { dt, t_final, checkpoint_every: usize::MAX, check_positivity: false, angles: Vec::new() }
    }

    pub fn violations(&self) -> Violations {
        let mut v = Violations::new();
        v.check(self.dt > 0.0 && self.dt.is_finite(), "dt", "dt > 0", self.dt);
        v.check(self.t_final.is_finite() && self.t_final >= 0.0, "t_final", "t_final ≥ 0", self.t_final);
        v.check(self.t_final == 0.0 || self.dt <= self.t_final, "dt", "dt ≤ t_final", self.dt);
        v.check(self.checkpoint_every >= 1, "checkpoint_every", "checkpoint_every ≥ 1", self.checkpoint_every as f64);
        v
    }

    /// Step count and the step actually used: the largest step not above
    /// `dt` that divides `t_final` evenly.
    pub fn steps(&self) -> (usize, f64) {
        if self.t_final == 0.0 {
            return (0, 0.0);
        }
        let steps = ((self.t_final / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        (steps, self.t_final / steps as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub t: f64,
    pub moments: CollectiveMoments,
    pub second_moments: Vec<f64>,
    pub trace: f64,
    pub trace_imag: f64,
    pub purity: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: Option<f64>,
}

impl Checkpoint {
    fn record(t: f64, rho: &DensityMatrix, cfg: &IntegratorConfig) -> Result<Self> {
        let moments = CollectiveMoments::from_state(rho);
        let second_moments = cfg.angles.iter().map(|&th| moments.second_moment(QuadratureAngle::new(th))).collect();
        let tr = rho.trace();
        let min_eigenvalue = if cfg.check_positivity {
            let m = rho.min_eigenvalue();
            if m < POSITIVITY_TOL {
                return Err(Error::Numerical(format!("state lost positivity at t = {t}: min eigenvalue {m}")));
            }
            Some(m)
        } else {
            None
        };
        Ok(Self {
            t,
            moments,
            second_moments,
            trace: tr.re,
            trace_imag: tr.im,
            purity: rho.purity(),
            hermiticity_error: rho.hermiticity_error(),
            min_eigenvalue,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub checkpoints: Vec<Checkpoint>,
    pub final_state: DensityMatrix,
    pub angles: Vec<f64>,
}

impl Trajectory {
    pub fn last(&self) -> &Checkpoint {
        self.checkpoints.last().expect("trajectory always records the initial state")
    }

    /// Checkpoint table with columns `t, mean_x, mean_y, mean_z`, one
    /// second-moment column per recorded angle, `trace, purity`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,mean_x,mean_y,mean_z");
        for th in &self.angles {
            let _ = write!(s, ",second_moment_{th:.16e}");
        }
        s.push_str(",trace,purity\n");
        for c in &self.checkpoints {
            let _ = write!(
                s,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                c.t,
                c.moments.mean_x(),
                c.moments.mean_y(),
                c.moments.mean_z()
            );
            for m in &c.second_moments {
                let _ = write!(s, ",{m:.16e}");
            }
            let _ = writeln!(s, ",{:.16e},{:.16e}", c.trace, c.purity);
        }
        s
    }
}

/// Fixed-step RK4 integration of `dρ/dt = ℒ(ρ)`.
pub fn evolve_with(rho: &DensityMatrix, cfg: &IntegratorConfig, gen: &Generator) -> Result<Trajectory> {
    cfg.violations().into_result()?;
    if rho.n_spins() != gen.n_spins {
        return Err(Error::Domain(format!("state has {} spins, generator {}", rho.n_spins(), gen.n_spins)));
    }
    let (steps, h) = cfg.steps();
    let len = rho.as_slice().len();
    let mut state = rho.clone();
    let mut scratch = Scratch::new(len);
    let zero = Complex64::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![zero; len], vec![zero; len], vec![zero; len], vec![zero; len], vec![zero; len]);
    let mut checkpoints = vec![Checkpoint::record(0.0, &state, cfg)?];

    for step in 1..=steps {
        let y = state.as_slice();
        gen.apply(y, &mut k1, &mut scratch);
        axpy(&mut tmp, y, &k1, 0.5 * h);
        gen.apply(&tmp, &mut k2, &mut scratch);
        axpy(&mut tmp, y, &k2, 0.5 * h);
        gen.apply(&tmp, &mut k3, &mut scratch);
        axpy(&mut tmp, y, &k3, h);
        gen.apply(&tmp, &mut k4, &mut scratch);
        let w = h / 6.0;
        state
            .as_mut_slice()
            .par_iter_mut()
            .zip(k1.par_iter().zip(k2.par_iter()).zip(k3.par_iter().zip(k4.par_iter())))
            .for_each(|(s, ((a, b), (c, d)))| *s += w * (a + 2.0 * b + 2.0 * c + d));
        if step % HERMITIZE_EVERY == 0 {
            state.hermitize();
        }
        if step % cfg.checkpoint_every == 0 || step == steps {
            checkpoints.push(Checkpoint::record(step as f64 * h, &state, cfg)?);
        }
    }
    Ok(Trajectory { checkpoints, final_state: state, angles: cfg.angles.clone() })
}

fn axpy(out: &mut [Complex64], y: &[Complex64], k: &[Complex64], h: f64) {
    out.par_iter_mut().zip(y.par_iter().zip(k.par_iter())).for_each(|(o, (a, b))| *o = a + h * b);
}

/// Integrates the full generator (squeezing, decoherence and signal).
pub fn evolve(
    rho: &DensityMatrix,
    cfg: &IntegratorConfig,
    ensemble: &EnsembleParams,
    rates: &DecoherenceRates,
    proto: &ProtocolParams,
) -> Result<Trajectory> {
    let gen = Generator::from_params(ensemble, rates, proto, Terms::ALL)?;
    evolve_with(rho, cfg, &gen)
}

/// `⊗_i ½(𝕀 + Pσz^i)`.
pub fn build_initial_state(ensemble: &EnsembleParams) -> Result<DensityMatrix> {
    ensemble.validate()?;
    check_cap(ensemble.n_spins)?;
    DensityMatrix::product_state(&vec![[0.0, 0.0, ensemble.polarization]; ensemble.n_spins])
}
