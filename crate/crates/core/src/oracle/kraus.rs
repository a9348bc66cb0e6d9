//! Single-site Kraus channels and per-spin dephasing.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oracle::density::DensityMatrix;

/// 2 × 2 operator, `op[row][col]`, row/column 0 = spin up.
pub type Op2 = [[Complex64; 2]; 2];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Dephasing Kraus set `{√s 𝕀, √(1−s)|0⟩⟨0|, √(1−s)|1⟩⟨1|}`.
pub fn dephasing_kraus(s: f64) -> Result<[Op2; 3]> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("survival amplitude must lie in [0, 1], got {s}")));
    }
    let (a, b) = (s.sqrt(), (1.0 - s).sqrt());
    let z = c(0.0);
    Ok([[[c(a), z], [z, c(a)]], [[c(b), z], [z, z]], [[z, z], [z, c(b)]]])
}

/// `ρ → Σ_k K_k ρ K_k†` with every `K_k` acting on `site`.
pub fn apply_single_site(rho: &DensityMatrix, site: usize, kraus: &[Op2]) -> Result<DensityMatrix> {
    let n = rho.n_spins();
    if site >= n {
        return Err(Error::Domain(format!("site {site} out of range for {n} spins")));
    }
    let dim = rho.dim();
    let m = 1usize << site;
    let mut out = DensityMatrix::zeros(n)?;
    let src = rho.as_slice();
    let dst = out.as_mut_slice();
    for a in 0..dim {
        let ai = (a >> site) & 1;
        for b in 0..dim {
            let bi = (b >> site) & 1;
            let mut acc = c(0.0);
            for k in kraus {
                // (KρK†)_ab = Σ_{r,s} K_{a_i r} ρ_{a[r], b[s]} conj(K_{b_i s})
                for r in 0..2 {
                    let ar = (a & !m) | (r << site);
                    for s in 0..2 {
                        let bs = (b & !m) | (s << site);
                        acc += k[ai][r] * src[ar * dim + bs] * k[bi][s].conj();
                    }
                }
            }
            dst[a * dim + b] = acc;
        }
    }
    Ok(out)
}

/// Dephasing with survival amplitude `s_i` on every spin, through the Kraus sets.
pub fn apply_dephasing_sites(rho: &DensityMatrix, s: &[f64]) -> Result<DensityMatrix> {
    if s.len() != rho.n_spins() {
        return Err(Error::Domain(format!("{} survival amplitudes for {} spins", s.len(), rho.n_spins())));
    }
    let mut out = rho.clone();
    for (site, &si) in s.iter().enumerate() {
        out = apply_single_site(&out, site, &dephasing_kraus(si)?)?;
    }
    Ok(out)
}

/// Dephasing with the same survival amplitude on every spin.
pub fn apply_dephasing(rho: &DensityMatrix, s: f64) -> Result<DensityMatrix> {
    apply_dephasing_sites(rho, &vec![s; rho.n_spins()])
}

/// Closed form of [`apply_dephasing`]: `ρ_ab → s^{|a ⊕ b|} ρ_ab`.
pub fn apply_dephasing_closed(rho: &DensityMatrix, s: f64) -> Result<DensityMatrix> {
    dephasing_kraus(s)?;
    let dim = rho.dim();
    let pow: Vec<f64> = (0..=rho.n_spins()).map(|k| s.powi(k as i32)).collect();
    let data = rho
        .as_slice()
        .iter()
        .enumerate()
        .map(|(idx, z)| z * pow[((idx / dim) ^ (idx % dim)).count_ones() as usize])
        .collect();
    DensityMatrix::from_data(rho.n_spins(), data)
}
