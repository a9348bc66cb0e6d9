use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::density::DensityMatrix;
use crate::oracle::pauli::{expectation, local, Pauli};
use crate::params::QuadratureAngle;

/// Transverse two-spin correlators `⟨σα^i σβ^j⟩` for `α, β ∈ {x, y}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PairCorrelation {
    pub xx: f64,
    pub xy: f64,
    pub yx: f64,
    pub yy: f64,
}

/// Collective spin moments of an `N`-spin state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollectiveMoments {
    pub n_spins: usize,
    /// Per-spin `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)`.
    pub bloch: Vec<[f64; 3]>,
    /// `pairs[i * N + j]`; the diagonal is unused and left zero.
    pub pairs: Vec<PairCorrelation>,
}

impl CollectiveMoments {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        let n = rho.n_spins();
        let bloch =
            (0..n).map(|i| [local(rho, i, Pauli::X), local(rho, i, Pauli::Y), local(rho, i, Pauli::Z)]).collect();
        let mut pairs = vec![PairCorrelation::default(); n * n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let e = |a, b| expectation(rho, &[(i, a), (j, b)]).re;
                pairs[i * n + j] = PairCorrelation {
                    xx: e(Pauli::X, Pauli::X),
                    xy: e(Pauli::X, Pauli::Y),
                    yx: e(Pauli::Y, Pauli::X),
                    yy: e(Pauli::Y, Pauli::Y),
                };
            }
        }
        Self { n_spins: n, bloch, pairs }
    }

    pub fn pair(&self, i: usize, j: usize) -> PairCorrelation {
        self.pairs[i * self.n_spins + j]
    }

    pub fn mean_x(&self) -> f64 {
        self.bloch.iter().map(|b| b[0]).sum()
    }

    pub fn mean_y(&self) -> f64 {
        self.bloch.iter().map(|b| b[1]).sum()
    }

    pub fn mean_z(&self) -> f64 {
        self.bloch.iter().map(|b| b[2]).sum()
    }

    /// `⟨Q_θ⟩` with `Q_θ = Σ_i (cosθ σx^i + sinθ σy^i)`.
    pub fn quadrature_mean(&self, theta: QuadratureAngle) -> f64 {
        let (s, c) = theta.radians().sin_cos();
        c * self.mean_x() + s * self.mean_y()
    }

    /// Entries `(Sxx, Sxy, Syy)` of the symmetric second-moment form with
    /// `⟨Q_θ²⟩ = c²Sxx + 2cs·Sxy + s²Syy`.
    pub fn second_moment_form(&self) -> (f64, f64, f64) {
        let n = self.n_spins as f64;
        let (mut xx, mut xy, mut yy) = (n, 0.0, n);
        for i in 0..self.n_spins {
            for j in 0..self.n_spins {
                if i != j {
                    let p = self.pair(i, j);
                    xx += p.xx;
                    xy += 0.5 * (p.xy + p.yx);
                    yy += p.yy;
                }
            }
        }
        (xx, xy, yy)
    }

    /// `⟨Q_θ²⟩`.
    pub fn second_moment(&self, theta: QuadratureAngle) -> f64 {
        let (xx, xy, yy) = self.second_moment_form();
        let (s, c) = theta.radians().sin_cos();
        c * c * xx + 2.0 * c * s * xy + s * s * yy
    }

    /// `⟨Q_θ²⟩ − ⟨Q_θ⟩²`.
    pub fn central_second_moment(&self, theta: QuadratureAngle) -> f64 {
        let m = self.quadrature_mean(theta);
        self.second_moment(theta) - m * m
    }

    /// `ξ²_θ = ⟨Q_θ²⟩ / ⟨Σσz⟩`.
    pub fn xi2(&self, theta: QuadratureAngle) -> Result<f64> {
        let z = self.mean_z();
        if z.abs() <= 1e-12 * self.n_spins as f64 {
            return Err(Error::Numerical(format!("total polarization {z} too small for a squeezing ratio")));
        }
        Ok(self.second_moment(theta) / z)
    }

    /// Angle and value of the smallest `⟨Q_θ²⟩`.
    pub fn min_quadrature(&self) -> (QuadratureAngle, f64) {
        let (xx, xy, yy) = self.second_moment_form();
        let mean = 0.5 * (xx + yy);
        let radius = (0.5 * (xx - yy)).hypot(xy);
        let angle = if radius == 0.0 { 0.0 } else { 0.5 * xy.atan2(0.5 * (xx - yy)) + FRAC_PI_2 };
        (QuadratureAngle::new(angle), mean - radius)
    }
}
