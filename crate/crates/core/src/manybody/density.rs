use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::model::LatticeOrbital;
use super::state::ManyBodyState;
use crate::error::{Error, Result};

/// One-body reduced density matrix on the `2d` modes, `γ_αβ = ⟨a†_β a_α⟩/N`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneBodyDensityMatrix {
    pub matrix: DMatrix<C64>,
}

impl OneBodyDensityMatrix {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).camax()
    }

    /// Ascending eigenvalues (occupation numbers).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    /// `⟨φ, γ φ⟩`.
    pub fn overlap(&self, phi: &LatticeOrbital) -> f64 {
        phi.expectation(&self.matrix).re
    }
}

pub fn partial_trace(psi: &ManyBodyState) -> Result<OneBodyDensityMatrix> {
    psi.require_normalized(1e-10)?;
    if psi.n_particles() == 0 {
        return Err(Error::Contract("partial trace needs at least one particle".into()));
    }
    let basis = &psi.basis;
    let m_modes = basis.n_modes();
    let n = basis.n_particles() as f64;
    let mut g = DMatrix::from_element(m_modes, m_modes, C64::new(0.0, 0.0));
    let mut scratch = vec![0u8; m_modes];
    for (r, occ) in basis.iter().enumerate() {
        let c = psi.amplitudes[r];
        if c == C64::new(0.0, 0.0) {
            continue;
        }
        for a in 0..m_modes {
            if occ[a] == 0 {
                continue;
            }
            g[(a, a)] += c.norm_sqr() * occ[a] as f64;
            // a†_β a_α |occ⟩ = √(n_α (n_β + 1)) |occ − e_α + e_β⟩
            for b in 0..m_modes {
                if b == a {
                    continue;
                }
                scratch.copy_from_slice(occ);
                scratch[a] -= 1;
                scratch[b] += 1;
                let r2 = basis.rank(&scratch);
                let amp = ((occ[a] as f64) * (occ[b] as f64 + 1.0)).sqrt();
                g[(a, b)] += psi.amplitudes[r2].conj() * c * amp;
            }
        }
    }
    Ok(OneBodyDensityMatrix { matrix: g / C64::new(n, 0.0) })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceDistance {
    /// `Tr|γ − |φ⟩⟨φ||`.
    pub distance: f64,
    /// `1 − ⟨φ, γ φ⟩`.
    pub lower: f64,
    /// `2 √(1 − ⟨φ, γ φ⟩)`.
    pub upper: f64,
}

pub fn trace_distance(g: &OneBodyDensityMatrix, phi: &LatticeOrbital) -> Result<TraceDistance> {
    phi.require_normalized(1e-10)?;
    if phi.amplitudes.len() != g.dimension() {
        return Err(Error::Structural("orbital and density matrix disagree on the number of modes".into()));
    }
    let v = phi.as_vector();
    let diff = &g.matrix - &v * v.adjoint();
    let distance = diff.symmetric_eigenvalues().iter().map(|e| e.abs()).sum();
    let lower = 1.0 - g.overlap(phi);
    Ok(TraceDistance { distance, lower, upper: 2.0 * lower.max(0.0).sqrt() })
}
