use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest spin count the dense oracle accepts (4096 × 4096 matrices).
pub const MAX_SPINS: usize = 12;

pub(crate) fn check_cap(n: usize) -> Result<()> {
    if n > MAX_SPINS {
        return Err(Error::Resource(format!("dense oracle supports at most {MAX_SPINS} spins, got {n}")));
    }
    if n == 0 {
        return Err(Error::Domain("dense oracle needs at least one spin".into()));
    }
    Ok(())
}

/// Dense `2^N × 2^N` density matrix, row-major.
///
/// Bit `i` of a basis index is spin `i`; bit value 0 is spin up (`σz = +1`).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_spins: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zeros(n_spins: usize) -> Result<Self> {
        check_cap(n_spins)?;
        let dim = 1usize << n_spins;
        Ok(Self { n_spins, dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] })
    }

    pub fn maximally_mixed(n_spins: usize) -> Result<Self> {
        let mut rho = Self::zeros(n_spins)?;
        let w = 1.0 / rho.dim as f64;
        for a in 0..rho.dim {
            rho.data[a * rho.dim + a] = Complex64::new(w, 0.0);
        }
        Ok(rho)
    }

    /// `|k⟩⟨k|` for computational basis state `k`.
    pub fn basis_state(n_spins: usize, k: usize) -> Result<Self> {
        let mut rho = Self::zeros(n_spins)?;
        if k >= rho.dim {
            return Err(Error::Domain(format!("basis index {k} out of range")));
        }
        rho.data[k * rho.dim + k] = Complex64::new(1.0, 0.0);
        Ok(rho)
    }

    /// `⊗_i ½(𝕀 + r_i·σ)` for per-spin Bloch vectors `r_i = (x, y, z)`.
    pub fn product_state(bloch: &[[f64; 3]]) -> Result<Self> {
        let mut rho = Self::zeros(bloch.len())?;
        let locals: Vec<[[Complex64; 2]; 2]> = bloch
            .iter()
            .map(|&[x, y, z]| {
                [
                    [Complex64::new(0.5 * (1.0 + z), 0.0), Complex64::new(0.5 * x, -0.5 * y)],
                    [Complex64::new(0.5 * x, 0.5 * y), Complex64::new(0.5 * (1.0 - z), 0.0)],
                ]
            })
            .collect();
        let dim = rho.dim;
        for a in 0..dim {
            for b in 0..dim {
                let mut v = Complex64::new(1.0, 0.0);
                for (i, m) in locals.iter().enumerate() {
                    v *= m[(a >> i) & 1][(b >> i) & 1];
                }
                rho.data[a * dim + b] = v;
            }
        }
        Ok(rho)
    }

    pub fn from_data(n_spins: usize, data: Vec<Complex64>) -> Result<Self> {
        check_cap(n_spins)?;
        let dim = 1usize << n_spins;
        if data.len() != dim * dim {
            return Err(Error::Domain(format!("expected {} entries, got {}", dim * dim, data.len())));
        }
        Ok(Self { n_spins, dim, data })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.data[a * self.dim + b]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|a| self.data[a * self.dim + a]).sum()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ_ab ρ_ab ρ_ba = Σ_ab |ρ_ab|² for Hermitian ρ
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `max |ρ − ρ†|` over entries.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0f64;
        for a in 0..d {
            for b in a..d {
                worst = worst.max((self.data[a * d + b] - self.data[b * d + a].conj()).norm());
            }
        }
        worst
    }

    /// `ρ ← (ρ + ρ†)/2`.
    pub fn hermitize(&mut self) {
        let d = self.dim;
        for a in 0..d {
            let diag = &mut self.data[a * d + a];
            *diag = Complex64::new(diag.re, 0.0);
            for b in a + 1..d {
                let avg = 0.5 * (self.data[a * d + b] + self.data[b * d + a].conj());
                self.data[a * d + b] = avg;
                self.data[b * d + a] = avg.conj();
            }
        }
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.data, self.dim)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Reduced state of the listed spins, in the listed order (first entry is
    /// bit 0 of the result).
    pub fn partial_trace_keep(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() || keep.iter().any(|&k| k >= self.n_spins) {
            return Err(Error::Domain(format!("invalid spins to keep: {keep:?}")));
        }
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != keep.len() {
            return Err(Error::Domain(format!("spins to keep must be distinct: {keep:?}")));
        }
        let m = keep.len();
        let mut out = DensityMatrix::zeros(m)?;
        let traced: Vec<usize> = (0..self.n_spins).filter(|i| !keep.contains(i)).collect();
        let scatter = |small: usize, rest: usize| -> usize {
            let mut idx = 0;
            for (bit, &spin) in keep.iter().enumerate() {
                idx |= ((small >> bit) & 1) << spin;
            }
            for (bit, &spin) in traced.iter().enumerate() {
                idx |= ((rest >> bit) & 1) << spin;
            }
            idx
        };
        let (dm, dr) = (1usize << m, 1usize << traced.len());
        for a in 0..dm {
            for b in 0..dm {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..dr {
                    acc += self.get(scatter(a, r), scatter(b, r));
                }
                out.data[a * dm + b] = acc;
            }
        }
        Ok(out)
    }
}

pub(crate) fn hermitian_eigenvalues(data: &[Complex64], dim: usize) -> Vec<f64> {
    let mut m = DMatrix::from_row_slice(dim, dim, data);
    // symmetrize so the solver sees an exactly Hermitian input
    let ad = m.adjoint();
    m = (m + ad).scale(0.5);
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `½ Σ_k |λ_k(a − b)|`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::Domain(format!("dimension mismatch: {} vs {}", a.dim, b.dim)));
    }
    let diff: Vec<Complex64> = a.data.iter().zip(&b.data).map(|(x, y)| x - y).collect();
    Ok(0.5 * hermitian_eigenvalues(&diff, a.dim).iter().map(|l| l.abs()).sum::<f64>())
}
