//! Exact evolution under `U = Π_{i≠j} exp(−iθ_ij σx^iσx^j)`.
//!
//! `U` is diagonal in the x basis, so the state is rotated there with a
//! Walsh–Hadamard transform, multiplied by the phases, and rotated back.

use num_complex::Complex64;

use crate::error::Result;
use crate::inhomogeneous::coupling::{check_lengths, CouplingMatrix, PolarizationVector};
use crate::oracle::density::{check_cap, DensityMatrix};
use crate::oracle::moments::CollectiveMoments;

/// In-place unnormalized Walsh–Hadamard transform of each row and column.
fn hadamard_both_sides(data: &mut [Complex64], n: usize) {
    let dim = 1usize << n;
    for row in data.chunks_mut(dim) {
        fwht(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); dim];
    for b in 0..dim {
        for a in 0..dim {
            col[a] = data[a * dim + b];
        }
        fwht(&mut col);
        for a in 0..dim {
            data[a * dim + b] = col[a];
        }
    }
}

fn fwht(v: &mut [Complex64]) {
    let mut h = 1;
    while h < v.len() {
        for start in (0..v.len()).step_by(2 * h) {
            for k in start..start + h {
                let (x, y) = (v[k], v[k + h]);
                v[k] = x + y;
                v[k + h] = x - y;
            }
        }
        h *= 2;
    }
}

/// Applies the twisting unitary to an arbitrary state.
pub fn apply_twisting(rho: &DensityMatrix, couplings: &CouplingMatrix) -> Result<DensityMatrix> {
    let n = couplings.n_spins();
    check_cap(n)?;
    if rho.n_spins() != n {
        return Err(crate::error::Error::Domain(format!("state has {} spins, couplings {}", rho.n_spins(), n)));
    }
    let dim = 1usize << n;
    // x-basis phase φ(a) = −2 Σ_{i<j} θ_ij x_i x_j, x_i = ±1
    let phase: Vec<f64> = (0..dim)
        .map(|a| {
            let mut acc = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    let s = if ((a >> i) ^ (a >> j)) & 1 == 0 { 1.0 } else { -1.0 };
                    acc += couplings.get(i, j) * s;
                }
            }
            -2.0 * acc
        })
        .collect();
    let mut data = rho.as_slice().to_vec();
    hadamard_both_sides(&mut data, n);
    for a in 0..dim {
        for b in 0..dim {
            data[a * dim + b] *= Complex64::from_polar(1.0, phase[a] - phase[b]);
        }
    }
    hadamard_both_sides(&mut data, n);
    let norm = 1.0 / (dim * dim) as f64;
    data.iter_mut().for_each(|z| *z *= norm);
    DensityMatrix::from_data(n, data)
}

/// Twisted product state with per-spin Bloch vectors `(0, 0, P_k)`.
pub fn twisted_state(couplings: &CouplingMatrix, pols: &PolarizationVector) -> Result<DensityMatrix> {
    check_lengths(couplings, pols)?;
    check_cap(couplings.n_spins())?;
    let bloch: Vec<[f64; 3]> = pols.as_slice().iter().map(|&p| [0.0, 0.0, p]).collect();
    apply_twisting(&DensityMatrix::product_state(&bloch)?, couplings)
}

/// Exact moments after twisting the polarized product state.
pub fn evolve_variable_coupling(couplings: &CouplingMatrix, pols: &PolarizationVector) -> Result<CollectiveMoments> {
    Ok(CollectiveMoments::from_state(&twisted_state(couplings, pols)?))
}
