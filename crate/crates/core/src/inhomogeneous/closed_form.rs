//! Exact moments of the twisted product state for arbitrary couplings.
//!
//! With `c_jk = cos 4θ_jk` and `s_jk = sin 4θ_jk`:
//!
//! ```text
//! ⟨σz^k⟩       = P_k Π_{j≠k} c_jk
//! ⟨σx^kσx^l⟩   = 0
//! ⟨σy^kσy^l⟩   = ½P_kP_l [Π_{j≠k,l}(c_jk c_jl + s_jk s_jl) − Π_{j≠k,l}(c_jk c_jl − s_jk s_jl)]
//! ⟨σx^kσy^l⟩   = −P_l s_kl Π_{j≠k,l} c_jl
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inhomogeneous::coupling::{check_lengths, CouplingMatrix, PolarizationVector};
use crate::params::QuadratureAngle;

/// Product of reals kept as `ln|·|` plus sign so long products do not underflow.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SignedLogProduct {
    log_mag: f64,
    negative: bool,
    zero: bool,
}

impl SignedLogProduct {
    pub(crate) fn one() -> Self {
        Self { log_mag: 0.0, negative: false, zero: false }
    }

    pub(crate) fn mul(&mut self, x: f64) {
        if x == 0.0 {
            self.zero = true;
        } else {
            self.log_mag += x.abs().ln();
            self.negative ^= x < 0.0;
        }
    }

    pub(crate) fn value(self) -> f64 {
        if self.zero {
            0.0
        } else if self.negative {
            -self.log_mag.exp()
        } else {
            self.log_mag.exp()
        }
    }
}

/// Closed-form single-spin and pair moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairMoments {
    pub n_spins: usize,
    pub mean_z: Vec<f64>,
    /// `yy[k * N + l]`
    pub yy: Vec<f64>,
    /// `xy[k * N + l] = ⟨σx^kσy^l⟩`
    pub xy: Vec<f64>,
}

struct Trig {
    n: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl Trig {
    fn new(c: &CouplingMatrix) -> Self {
        let n = c.n_spins();
        let four: Vec<f64> = c.as_slice().iter().map(|t| 4.0 * t).collect();
        Self { n, cos: four.iter().map(|x| x.cos()).collect(), sin: four.iter().map(|x| x.sin()).collect() }
    }

    fn c(&self, i: usize, j: usize) -> f64 {
        self.cos[i * self.n + j]
    }

    fn s(&self, i: usize, j: usize) -> f64 {
        self.sin[i * self.n + j]
    }

    fn mean_z(&self, p: &[f64], k: usize) -> f64 {
        let mut prod = SignedLogProduct::one();
        for j in (0..self.n).filter(|&j| j != k) {
            prod.mul(self.c(j, k));
        }
        p[k] * prod.value()
    }

    fn yy(&self, p: &[f64], k: usize, l: usize) -> f64 {
        let (mut plus, mut minus) = (SignedLogProduct::one(), SignedLogProduct::one());
        for j in (0..self.n).filter(|&j| j != k && j != l) {
            let cc = self.c(j, k) * self.c(j, l);
            let ss = self.s(j, k) * self.s(j, l);
            plus.mul(cc + ss);
            minus.mul(cc - ss);
        }
        0.5 * p[k] * p[l] * (plus.value() - minus.value())
    }

    fn xy(&self, p: &[f64], k: usize, l: usize) -> f64 {
        let mut prod = SignedLogProduct::one();
        for j in (0..self.n).filter(|&j| j != k && j != l) {
            prod.mul(self.c(j, l));
        }
        -p[l] * self.s(k, l) * prod.value()
    }
}

pub fn pair_moments(couplings: &CouplingMatrix, pols: &PolarizationVector) -> Result<PairMoments> {
    check_lengths(couplings, pols)?;
    let trig = Trig::new(couplings);
    let n = trig.n;
    let p = pols.as_slice();
    let mut yy = vec![0.0; n * n];
    let mut xy = vec![0.0; n * n];
    for k in 0..n {
        for l in (0..n).filter(|&l| l != k) {
            yy[k * n + l] = trig.yy(p, k, l);
            xy[k * n + l] = trig.xy(p, k, l);
        }
    }
    Ok(PairMoments { n_spins: n, mean_z: (0..n).map(|k| trig.mean_z(p, k)).collect(), yy, xy })
}

/// Numerator `⟨Q_θ²⟩` and denominator `⟨Σσz⟩` of the squeezing ratio.
pub fn xi2_parts(couplings: &CouplingMatrix, pols: &PolarizationVector, theta: QuadratureAngle) -> Result<(f64, f64)> {
    check_lengths(couplings, pols)?;
    let trig = Trig::new(couplings);
    let n = trig.n;
    let p = pols.as_slice();
    let (s, c) = theta.radians().sin_cos();
    let (mut yy, mut xy) = (0.0, 0.0);
    for k in 0..n {
        for l in (0..n).filter(|&l| l != k) {
            yy += trig.yy(p, k, l);
            xy += trig.xy(p, k, l);
        }
    }
    let numerator = n as f64 + s * s * yy + 2.0 * s * c * xy;
    let denominator = (0..n).map(|k| trig.mean_z(p, k)).sum();
    Ok((numerator, denominator))
}

/// Exact squeezing ratio `ξ²_θ` for arbitrary couplings and polarizations.
pub fn xi2_theta_couplings(
    couplings: &CouplingMatrix,
    pols: &PolarizationVector,
    theta: QuadratureAngle,
) -> Result<f64> {
    let (a, b) = xi2_parts(couplings, pols, theta)?;
    if b.abs() <= 1e-12 * couplings.n_spins() as f64 {
        return Err(Error::Numerical(format!("degenerate denominator: total polarization {b}")));
    }
    Ok(a / b)
}

/// Quoted forms with doubled correlation terms and the opposite shear sign.
pub mod quoted {
    use super::*;

    pub fn xi2_theta_couplings(
        couplings: &CouplingMatrix,
        pols: &PolarizationVector,
        theta: QuadratureAngle,
    ) -> Result<f64> {
        check_lengths(couplings, pols)?;
        let trig = Trig::new(couplings);
        let n = trig.n;
        let p = pols.as_slice();
        let (s, c) = theta.radians().sin_cos();
        let mut a = n as f64;
        for k in 0..n {
            for l in (0..n).filter(|&l| l != k) {
                a += 2.0 * s * s * trig.yy(p, k, l) - 2.0 * (2.0 * s * c) * trig.xy(p, k, l);
            }
        }
        let b: f64 = (0..n).map(|k| trig.mean_z(p, k)).sum();
        Ok(a / b)
    }
}
