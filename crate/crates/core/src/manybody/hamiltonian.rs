use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::basis::SymmetricBasis;
use super::model::LatticeModel;
use crate::error::{Error, Result};

const PARALLEL_ROWS: usize = 2048;

/// Second-quantized `H = Σ h_αβ(t) a†_α a_β + interaction` in CSR form.
///
/// The sparsity pattern is fixed at construction: every stored off-diagonal
/// entry is `√(m_α (m_β + 1))` times one hopping or spin-flip element
/// `h_αβ`, so refreshing to a new time only rescales stored amplitudes. The
/// diagonal holds `Σ h_αα m_α` plus the density-density pair term
/// `c·(½ Σ_{i≠j} V_ij n_i n_j + ½ V_0 Σ n_i (n_i − 1))`, with `n_i` the total
/// occupation of site `i` and `c = 1/(N−1)` in mean-field mode.
pub struct Hamiltonian {
    basis: Arc<SymmetricBasis>,
    pairs: Vec<(usize, usize)>,
    row_ptr: Vec<usize>,
    col: Vec<u32>,
    term: Vec<u32>,
    amp: Vec<f64>,
    interaction: Vec<f64>,
    values: Vec<C64>,
    diag: Vec<f64>,
    time: f64,
}

impl Hamiltonian {
    pub fn new(model: &LatticeModel, basis: Arc<SymmetricBasis>, t: f64) -> Result<Self> {
        model.validate()?;
        if basis.n_modes() != model.n_modes() {
            return Err(Error::Structural(format!(
                "basis has {} modes, model has {}",
                basis.n_modes(),
                model.n_modes()
            )));
        }
        let pairs = model.coupled_pairs();
        let dim = basis.dimension();
        let d = model.sites;
        let scale = model.pair_scale(basis.n_particles());
        let v = model.pair_matrix();

        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col = Vec::new();
        let mut term = Vec::new();
        let mut amp = Vec::new();
        let mut interaction = Vec::with_capacity(dim);
        let mut scratch = vec![0u8; basis.n_modes()];
        row_ptr.push(0);
        for (r, m) in basis.iter().enumerate() {
            // ⟨m| a†_α a_β |m − e_α + e_β⟩ = √(m_α (m_β + 1))
            let mut entries: Vec<(u32, u32, f64)> = Vec::new();
            for (k, &(a, b)) in pairs.iter().enumerate() {
                if m[a] == 0 {
                    continue;
                }
                scratch.copy_from_slice(m);
                scratch[a] -= 1;
                scratch[b] += 1;
                let c = basis.rank(&scratch);
                debug_assert_ne!(c, r);
                entries.push((c as u32, k as u32, ((m[a] as f64) * (m[b] as f64 + 1.0)).sqrt()));
            }
            entries.sort_by_key(|e| (e.0, e.1));
            for (c, k, a) in entries {
                col.push(c);
                term.push(k);
                amp.push(a);
            }
            row_ptr.push(col.len());

            let n: Vec<f64> = (0..d).map(|i| (m[i] + m[d + i]) as f64).collect();
            let mut e = 0.0;
            for i in 0..d {
                e += 0.5 * v[(i, i)] * n[i] * (n[i] - 1.0);
                for j in 0..d {
                    if i != j {
                        e += 0.5 * v[(i, j)] * n[i] * n[j];
                    }
                }
            }
            interaction.push(scale * e);
        }
        let nnz = col.len();
        let mut h = Self {
            basis,
            pairs,
            row_ptr,
            col,
            term,
            amp,
            interaction,
            values: vec![C64::new(0.0, 0.0); nnz],
            diag: vec![0.0; dim],
            time: f64::NAN,
        };
        h.set_time(model, t)?;
        Ok(h)
    }

    /// Re-evaluates the one-body coefficients at time `t`.
    pub fn set_time(&mut self, model: &LatticeModel, t: f64) -> Result<()> {
        if self.time == t {
            return Ok(());
        }
        let h = model.one_body(t)?;
        let coeffs: Vec<C64> = self.pairs.iter().map(|&(a, b)| h[(a, b)]).collect();
        for (value, (k, a)) in self.values.iter_mut().zip(self.term.iter().zip(&self.amp)) {
            *value = coeffs[*k as usize] * *a;
        }
        let n_modes = self.basis.n_modes();
        let onsite: Vec<f64> = (0..n_modes).map(|a| h[(a, a)].re).collect();
        for (r, m) in self.basis.iter().enumerate() {
            let one: f64 = m.iter().zip(&onsite).map(|(&n, e)| n as f64 * e).sum();
            self.diag[r] = one + self.interaction[r];
        }
        self.time = t;
        Ok(())
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn basis(&self) -> &Arc<SymmetricBasis> {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.diag.len()
    }

    /// Stored off-diagonal entries (the diagonal is kept separately).
    pub fn nnz(&self) -> usize {
        self.col.len()
    }

    /// Diagonal pair-interaction energies per basis state.
    pub fn interaction_diagonal(&self) -> &[f64] {
        &self.interaction
    }

    pub fn apply(&self, x: &[C64], y: &mut [C64]) {
        let row = |(r, out): (usize, &mut C64)| {
            let mut acc = x[r] * self.diag[r];
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col[k] as usize];
            }
            *out = acc;
        };
        if y.len() >= PARALLEL_ROWS {
            y.par_iter_mut().enumerate().for_each(row);
        } else {
            y.iter_mut().enumerate().for_each(row);
        }
    }

    pub fn expectation(&self, x: &[C64]) -> C64 {
        let mut y = vec![C64::new(0.0, 0.0); x.len()];
        self.apply(x, &mut y);
        x.iter().zip(&y).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let n = self.dimension();
        let mut m = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
        for r in 0..n {
            m[(r, r)] += C64::new(self.diag[r], 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                m[(r, self.col[k] as usize)] += self.values[k];
            }
        }
        m
    }
}

pub fn assemble_hamiltonian(model: &LatticeModel, basis: &Arc<SymmetricBasis>, t: f64) -> Result<Hamiltonian> {
    Hamiltonian::new(model, basis.clone(), t)
}
