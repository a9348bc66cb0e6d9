use num_complex::Complex64;

use crate::oracle::density::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// `Tr(ρ ⊗_k σ_{α_k}^{i_k})` for distinct sites, in `O(2^N)`.
pub fn expectation(rho: &DensityMatrix, ops: &[(usize, Pauli)]) -> Complex64 {
    let (mut flip, mut sign, mut n_y) = (0usize, 0usize, 0u32);
    for &(site, op) in ops {
        let bit = 1usize << site;
        match op {
            Pauli::X => flip |= bit,
            Pauli::Y => {
                flip |= bit;
                sign |= bit;
                n_y += 1;
            }
            Pauli::Z => sign |= bit,
        }
    }
    // ⟨O⟩ = Σ_a ρ_{a, a⊕flip} O_{a⊕flip, a}, with O_{a⊕flip, a} = i^{n_y} (−1)^{|a ∧ sign|}
    let dim = rho.dim();
    let data = rho.as_slice();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..dim {
        let v = data[a * dim + (a ^ flip)];
        if (a & sign).count_ones() % 2 == 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    acc * Complex64::i().powu(n_y)
}

/// Real part of [`expectation`] for a single-site operator.
pub fn local(rho: &DensityMatrix, site: usize, op: Pauli) -> f64 {
    expectation(rho, &[(site, op)]).re
}
