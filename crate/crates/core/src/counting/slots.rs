use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::frame::{CondensateProjector, Frame};
use super::weight::{build_m_variants, WeightFunction};
use crate::error::{Error, Result};
use crate::manybody::{ManyBodyState, SymmetricBasis};

pub const DEFAULT_SLOT_CAP: usize = 4_000_000;

/// Which one-body projector sits on a distinguished slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    P,
    Q,
}

/// Wavefunctions with two distinguished particles and `N − 2` symmetric
/// ones: amplitudes `T(α, β, n'')` stored at `(α·M + β)·D'' + rank(n'')`.
/// The embedding of a symmetric state is an isometry.
#[derive(Clone, Debug)]
pub struct SlotSpace {
    full: Arc<SymmetricBasis>,
    rest: SymmetricBasis,
}

impl SlotSpace {
    pub fn new(full: Arc<SymmetricBasis>) -> Result<Self> {
        Self::with_cap(full, DEFAULT_SLOT_CAP)
    }

    pub fn with_cap(full: Arc<SymmetricBasis>, cap: usize) -> Result<Self> {
        let (m, n) = (full.n_modes(), full.n_particles());
        if n < 2 {
            return Err(Error::Contract("two distinguished slots need N ≥ 2".into()));
        }
        let rest = SymmetricBasis::with_cap(m, n - 2, cap)?;
        let required = m.saturating_mul(m).saturating_mul(rest.dimension());
        if required > cap {
            return Err(Error::Size { required, cap });
        }
        Ok(Self { full, rest })
    }

    pub fn dimension(&self) -> usize {
        self.pairs() * self.rest.dimension()
    }

    fn pairs(&self) -> usize {
        self.full.n_modes() * self.full.n_modes()
    }

    /// `(α, β, occupations of the remainder)` of a slot index.
    pub fn decompose(&self, index: usize) -> (usize, usize, &[u8]) {
        let m = self.full.n_modes();
        let d = self.rest.dimension();
        let pair = index / d;
        (pair / m, pair % m, self.rest.occupation(index % d))
    }

    /// Particles outside mode 0 in slot basis state `index`.
    pub fn excitations(&self, index: usize) -> usize {
        let (a, b, rest) = self.decompose(index);
        usize::from(a != 0) + usize::from(b != 0) + (self.full.n_particles() - 2 - rest[0] as usize)
    }

    fn visit(&self, mut f: impl FnMut(usize, usize, f64)) {
        let m = self.full.n_modes();
        let n = self.full.n_particles() as f64;
        let d = self.rest.dimension();
        let mut scratch = vec![0u8; m];
        for (r, occ) in self.full.iter().enumerate() {
            for a in 0..m {
                if occ[a] == 0 {
                    continue;
                }
                for b in 0..m {
                    let nb = occ[b] as usize - usize::from(a == b);
                    if occ[b] == 0 || nb == 0 {
                        continue;
                    }
                    scratch.copy_from_slice(occ);
                    scratch[a] -= 1;
                    scratch[b] -= 1;
                    let w = (occ[a] as f64 * nb as f64 / (n * (n - 1.0))).sqrt();
                    f(r, (a * m + b) * d + self.rest.rank(&scratch), w);
                }
            }
        }
    }

    /// Symmetric occupation amplitudes to slot amplitudes.
    pub fn embed(&self, amps: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dimension()];
        self.visit(|r, s, w| out[s] = amps[r] * w);
        out
    }

    /// Adjoint of [`embed`](Self::embed): symmetrizes and returns occupation amplitudes.
    pub fn project(&self, data: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.full.dimension()];
        self.visit(|r, s, w| out[r] += data[s] * w);
        out
    }

    /// A two-body operator on slots 1 and 2, indexed by `α·M + β`.
    pub fn apply_two_body(&self, data: &[C64], a: &DMatrix<C64>) -> Vec<C64> {
        let d = self.rest.dimension();
        let x = DMatrix::from_row_slice(self.pairs(), d, data);
        let y = a * x;
        let mut out = vec![C64::new(0.0, 0.0); data.len()];
        for p in 0..self.pairs() {
            for r in 0..d {
                out[p * d + r] = y[(p, r)];
            }
        }
        out
    }

    /// A one-body operator on slot `which` (0 or 1).
    pub fn apply_one_body(&self, data: &[C64], which: usize, m: &DMatrix<C64>) -> Vec<C64> {
        let id = DMatrix::<C64>::identity(m.nrows(), m.ncols());
        let two = if which == 0 { m.kronecker(&id) } else { id.kronecker(m) };
        self.apply_two_body(data, &two)
    }

    /// Multiplies entry `(α, β, n'')` by `f(α, β, k)`.
    pub fn scale(&self, data: &[C64], f: impl Fn(usize, usize, usize) -> f64) -> Vec<C64> {
        (0..data.len())
            .map(|i| {
                let (a, b, _) = self.decompose(i);
                data[i] * f(a, b, self.excitations(i))
            })
            .collect()
    }

    /// `Q₁ ⊗ Q₂` on the slots, with mode 0 as the condensate.
    pub fn mask(&self, data: &[C64], first: Level, second: Level) -> Vec<C64> {
        let keep = |lvl: Level, mode: usize| (lvl == Level::P) == (mode == 0);
        self.scale(data, |a, b, _| if keep(first, a) && keep(second, b) { 1.0 } else { 0.0 })
    }
}

/// Slot space in the frame where the condensate is mode 0.
pub struct SlotFrame {
    pub frame: Frame,
    pub slots: SlotSpace,
}

impl SlotFrame {
    pub fn new(proj: &CondensateProjector, basis: Arc<SymmetricBasis>) -> Result<Self> {
        let frame = Frame::new(proj, basis.clone())?;
        let slots = SlotSpace::new(basis)?;
        Ok(Self { frame, slots })
    }

    pub fn to_slots(&self, psi: &ManyBodyState) -> Vec<C64> {
        self.slots.embed(&self.frame.rotate(&psi.amplitudes))
    }

    pub fn from_slots(&self, data: &[C64]) -> Vec<C64> {
        self.frame.unrotate(&self.slots.project(data))
    }

    /// A two-body operator given in the original modes, moved to the frame.
    pub fn two_body(&self, a: &DMatrix<C64>) -> DMatrix<C64> {
        self.frame.two_body(a)
    }

    /// `R₁₂ = p₁p₂ m̂^b + (p₁q₂ + q₁p₂) m̂^a`.
    pub fn apply_r12(&self, data: &[C64], weight_m: &WeightFunction) -> Result<Vec<C64>> {
        let [ma, mb, ..] = build_m_variants(weight_m)?;
        Ok(self.slots.scale(data, |a, b, k| match (a == 0, b == 0) {
            (true, true) => mb.value(k as i64),
            (true, false) | (false, true) => ma.value(k as i64),
            _ => 0.0,
        }))
    }

    /// `‖R₁₂‖_op`: the largest weight that can appear on a slot state.
    pub fn r12_norm(&self, weight_m: &WeightFunction) -> Result<f64> {
        let [ma, mb, ..] = build_m_variants(weight_m)?;
        let n = self.slots.full.n_particles() as i64;
        let both = (0..=n - 2).map(|k| mb.value(k).abs());
        let one = (1..=n - 1).map(|k| ma.value(k).abs());
        Ok(both.chain(one).fold(0.0, f64::max))
    }
}

/// `R₁₂ ψ` compressed back onto the symmetric space.
pub fn apply_r12(psi: &ManyBodyState, proj: &CondensateProjector, weight_m: &WeightFunction) -> Result<ManyBodyState> {
    let sf = SlotFrame::new(proj, psi.basis.clone())?;
    let out = sf.apply_r12(&sf.to_slots(psi), weight_m)?;
    ManyBodyState::new(psi.basis.clone(), sf.from_slots(&out))
}

pub(crate) fn norm(data: &[C64]) -> f64 {
    data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Random Hermitian two-body operator on `M²` pair states.
pub(crate) fn random_hermitian(dim: usize, rng: &mut impl rand::Rng) -> DMatrix<C64> {
    let a = DMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(rand_distr::StandardNormal), rng.sample(rand_distr::StandardNormal))
    });
    (&a + a.adjoint()) * C64::new(0.5, 0.0)
}
