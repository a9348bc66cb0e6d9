use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violations};
use crate::params::polarization_violations;

/// Symmetric per-pair twisting angles `θ_ij` with zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingMatrix {
    n_spins: usize,
    theta: Vec<f64>,
}

impl CouplingMatrix {
    /// Builds from a row-major `N × N` table; must be exactly symmetric with
    /// a zero diagonal.
    pub fn from_rows(n_spins: usize, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != n_spins * n_spins {
            return Err(Error::Domain(format!("expected {} entries, got {}", n_spins * n_spins, theta.len())));
        }
        let mut v = Violations::new();
        for i in 0..n_spins {
            v.check(theta[i * n_spins + i] == 0.0, "theta", "θ_ii = 0", theta[i * n_spins + i]);
            for j in 0..n_spins {
                let t = theta[i * n_spins + j];
                v.check(t.is_finite(), "theta", "θ_ij finite", t);
                if j > i {
                    v.check(t == theta[j * n_spins + i], "theta", "θ_ij = θ_ji", t);
                }
            }
        }
        v.into_result()?;
        Ok(Self { n_spins, theta })
    }

    /// Builds from the upper triangle `θ_ij`, `i < j`, in row-major order.
    pub fn from_upper(n_spins: usize, upper: &[f64]) -> Result<Self> {
        if upper.len() != n_spins * n_spins.saturating_sub(1) / 2 {
            return Err(Error::Domain(format!(
                "expected {} upper-triangle entries, got {}",
                n_spins * n_spins.saturating_sub(1) / 2,
                upper.len()
            )));
        }
        let mut theta = vec![0.0; n_spins * n_spins];
        let mut it = upper.iter();
        for i in 0..n_spins {
            for j in i + 1..n_spins {
                let t = *it.next().expect("length checked above");
                theta[i * n_spins + j] = t;
                theta[j * n_spins + i] = t;
            }
        }
        Self::from_rows(n_spins, theta)
    }

    pub fn uniform(n_spins: usize, theta0: f64) -> Result<Self> {
        let upper = vec![theta0; n_spins * n_spins.saturating_sub(1) / 2];
        Self::from_upper(n_spins, &upper)
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.theta[i * self.n_spins + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }
}

/// Per-spin initial polarizations `P_k ∈ (0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarizationVector(Vec<f64>);

impl PolarizationVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let mut v = Violations::new();
        for &p in &values {
            v.extend(polarization_violations(p));
        }
        v.into_result()?;
        Ok(Self(values))
    }

    pub fn uniform(n_spins: usize, p: f64) -> Result<Self> {
        Self::new(vec![p; n_spins])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn check_lengths(couplings: &CouplingMatrix, pols: &PolarizationVector) -> Result<()> {
    if couplings.n_spins() != pols.len() {
        return Err(Error::Domain(format!(
            "coupling matrix has {} spins but {} polarizations were given",
            couplings.n_spins(),
            pols.len()
        )));
    }
    Ok(())
}
