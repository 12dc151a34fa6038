use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::manybody::{factorials, LatticeOrbital, SymmetricBasis};

/// The rank-one projector `p = |φ⟩⟨φ|` on the condensate orbital, lifted to
/// `N` particles.
#[derive(Clone, Debug, PartialEq)]
pub struct CondensateProjector {
    pub orbital: LatticeOrbital,
    pub n_particles: usize,
}

impl CondensateProjector {
    pub fn new(orbital: LatticeOrbital, n_particles: usize) -> Result<Self> {
        orbital.require_normalized(1e-12)?;
        Ok(Self { orbital, n_particles })
    }

    pub fn p(&self) -> DMatrix<C64> {
        let v = self.orbital.as_vector();
        &v * v.adjoint()
    }

    pub fn q(&self) -> DMatrix<C64> {
        let m = self.orbital.amplitudes.len();
        DMatrix::identity(m, m) - self.p()
    }
}

type Givens = [[C64; 2]; 2];

/// One-body unitary `W` with `Wφ = e₀`, stored as Givens rotations on mode
/// pairs `(0, β)` so it can be lifted to Fock space one pair at a time.
/// Coefficients `c` of a state in the original modes become `Γ(W) c`, the
/// coefficients in a mode basis whose first element is `φ`.
pub struct Frame {
    basis: Arc<SymmetricBasis>,
    givens: Vec<(usize, Givens)>,
    w: DMatrix<C64>,
    fact: Vec<f64>,
    binom: Vec<Vec<f64>>,
}

impl Frame {
    pub fn new(proj: &CondensateProjector, basis: Arc<SymmetricBasis>) -> Result<Self> {
        proj.orbital.require_normalized(1e-12)?;
        let m = basis.n_modes();
        if proj.orbital.amplitudes.len() != m {
            return Err(Error::Structural(format!(
                "orbital has {} modes, basis has {m}",
                proj.orbital.amplitudes.len()
            )));
        }
        if proj.n_particles != basis.n_particles() {
            return Err(Error::Structural("projector and basis disagree on N".into()));
        }
        let mut x = proj.orbital.amplitudes.clone();
        let mut givens = Vec::new();
        let mut w = DMatrix::<C64>::identity(m, m);
        for beta in (1..m).rev() {
            let r = (x[0].norm_sqr() + x[beta].norm_sqr()).sqrt();
            if x[beta].norm() == 0.0 || r == 0.0 {
                continue;
            }
            let g = [[x[0].conj() / r, x[beta].conj() / r], [-x[beta] / r, x[0] / r]];
            x[0] = C64::new(r, 0.0);
            x[beta] = C64::new(0.0, 0.0);
            rotate_rows(&mut w, beta, &g);
            givens.push((beta, g));
        }
        // a phase left on mode 0 when φ is a multiple of e₀
        if (x[0] - C64::new(1.0, 0.0)).norm() > 0.0 {
            let phase = x[0].conj() / x[0].norm();
            let g = [[phase, C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]];
            let beta = if m > 1 { 1 } else { 0 };
            if beta == 0 {
                return Err(Error::Unsupported("frame rotation needs at least two modes".into()));
            }
            rotate_rows(&mut w, beta, &g);
            givens.push((beta, g));
        }
        let n = basis.n_particles();
        let fact = factorials(n);
        let binom = (0..=n).map(|a| (0..=a).map(|b| fact[a] / (fact[b] * fact[a - b])).collect()).collect();
        Ok(Self { basis, givens, w, fact, binom })
    }

    pub fn basis(&self) -> &Arc<SymmetricBasis> {
        &self.basis
    }

    /// `W`.
    pub fn unitary(&self) -> &DMatrix<C64> {
        &self.w
    }

    /// `Γ(W) c`.
    pub fn rotate(&self, amps: &[C64]) -> Vec<C64> {
        self.givens.iter().fold(amps.to_vec(), |acc, (beta, g)| self.lift(&acc, *beta, g))
    }

    /// `Γ(W)† c`.
    pub fn unrotate(&self, amps: &[C64]) -> Vec<C64> {
        self.givens.iter().rev().fold(amps.to_vec(), |acc, (beta, g)| {
            let adj = [[g[0][0].conj(), g[1][0].conj()], [g[0][1].conj(), g[1][1].conj()]];
            self.lift(&acc, *beta, &adj)
        })
    }

    /// Number of particles outside the condensate in rotated basis state `index`.
    pub fn excitations(&self, index: usize) -> usize {
        self.basis.n_particles() - self.basis.occupation(index)[0] as usize
    }

    /// `Σ_k f(k) P_k` applied to `amps`.
    pub fn apply_weights(&self, amps: &[C64], f: impl Fn(usize) -> f64) -> Vec<C64> {
        let mut r = self.rotate(amps);
        for (i, z) in r.iter_mut().enumerate() {
            *z *= f(self.excitations(i));
        }
        self.unrotate(&r)
    }

    /// `‖P_k ψ‖²` for `k = 0..=N`.
    pub fn excitation_distribution(&self, amps: &[C64]) -> Vec<f64> {
        let mut out = vec![0.0; self.basis.n_particles() + 1];
        for (i, z) in self.rotate(amps).iter().enumerate() {
            out[self.excitations(i)] += z.norm_sqr();
        }
        out
    }

    /// `W M W†` for a one-body operator.
    pub fn one_body(&self, m: &DMatrix<C64>) -> DMatrix<C64> {
        &self.w * m * self.w.adjoint()
    }

    /// `(W⊗W) A (W⊗W)†` for a two-body operator indexed by `α·M + β`.
    pub fn two_body(&self, a: &DMatrix<C64>) -> DMatrix<C64> {
        let ww = self.w.kronecker(&self.w);
        &ww * a * ww.adjoint()
    }

    /// Applies `Γ(G)` for the two-mode unitary `g` on modes `(0, β)`:
    /// `a†₀ ↦ g₀₀ a†₀ + g₁₀ a†_β`, `a†_β ↦ g₀₁ a†₀ + g₁₁ a†_β`.
    fn lift(&self, amps: &[C64], beta: usize, g: &Givens) -> Vec<C64> {
        let basis = &self.basis;
        let (a, b, c, d) = (g[0][0], g[0][1], g[1][0], g[1][1]);
        let mut out = vec![C64::new(0.0, 0.0); amps.len()];
        let mut scratch = vec![0u8; basis.n_modes()];
        for (r, occ) in basis.iter().enumerate() {
            let amp = amps[r];
            if amp == C64::new(0.0, 0.0) {
                continue;
            }
            let (n0, nb) = (occ[0] as usize, occ[beta] as usize);
            let s = n0 + nb;
            scratch.copy_from_slice(occ);
            for m0 in 0..=s {
                let mb = s - m0;
                let mut coef = C64::new(0.0, 0.0);
                for j in m0.saturating_sub(nb)..=m0.min(n0) {
                    let l = m0 - j;
                    coef += a.powu(j as u32)
                        * c.powu((n0 - j) as u32)
                        * b.powu(l as u32)
                        * d.powu((nb - l) as u32)
                        * (self.binom[n0][j] * self.binom[nb][l]);
                }
                if coef == C64::new(0.0, 0.0) {
                    continue;
                }
                let norm = (self.fact[m0] * self.fact[mb] / (self.fact[n0] * self.fact[nb])).sqrt();
                scratch[0] = m0 as u8;
                scratch[beta] = mb as u8;
                out[basis.rank(&scratch)] += coef * norm * amp;
            }
        }
        out
    }
}

fn rotate_rows(w: &mut DMatrix<C64>, beta: usize, g: &Givens) {
    for col in 0..w.ncols() {
        let (x0, xb) = (w[(0, col)], w[(beta, col)]);
        w[(0, col)] = g[0][0] * x0 + g[0][1] * xb;
        w[(beta, col)] = g[1][0] * x0 + g[1][1] * xb;
    }
}
