use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spinor::{Mat2, MatrixPotential};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingMode {
    /// Pair term used as given (the caller supplies the discretized `V_N`).
    GrossPitaevskii,
    /// Pair term divided by `N − 1`.
    MeanField,
}

/// Bosons with spin on a 1D ring of `sites` sites. Mode `α = spin·d + site`,
/// spin 0 = up.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeModel {
    pub sites: usize,
    /// Lattice spacing; site `i` sits at `x = i·spacing` when sampling `S`.
    pub spacing: f64,
    pub hopping: f64,
    pub potential: MatrixPotential,
    /// `V` as a function of ring distance `0..=sites/2`.
    pub pair_by_distance: Vec<f64>,
    pub scaling: ScalingMode,
}

impl LatticeModel {
    pub fn validate(&self) -> Result<()> {
        if !(2..=8).contains(&self.sites) {
            return Err(Error::Config(format!("ring needs 2 to 8 sites, got {}", self.sites)));
        }
        if !(self.hopping > 0.0) || !(self.spacing > 0.0) {
            return Err(Error::Config("hopping and spacing must be positive".into()));
        }
        if self.pair_by_distance.len() != self.sites / 2 + 1 {
            return Err(Error::Structural(format!(
                "pair potential needs {} ring distances, got {}",
                self.sites / 2 + 1,
                self.pair_by_distance.len()
            )));
        }
        if self.pair_by_distance.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("pair potential must be finite".into()));
        }
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        2 * self.sites
    }

    pub fn ring_distance(&self, i: usize, j: usize) -> usize {
        let d = i.abs_diff(j);
        d.min(self.sites - d)
    }

    pub fn pair(&self, i: usize, j: usize) -> f64 {
        self.pair_by_distance[self.ring_distance(i, j)]
    }

    /// Site-space pair matrix `V_ij`.
    pub fn pair_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.sites, self.sites, |i, j| self.pair(i, j))
    }

    /// Prefactor on the pair term for `n` particles.
    pub fn pair_scale(&self, n: usize) -> f64 {
        match self.scaling {
            ScalingMode::MeanField if n > 1 => 1.0 / (n - 1) as f64,
            _ => 1.0,
        }
    }

    /// Ring Laplacian `hopping · (2δ_ij − A_ij)` on sites.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let d = self.sites;
        let mut k = DMatrix::zeros(d, d);
        for i in 0..d {
            k[(i, i)] += 2.0 * self.hopping;
            k[(i, (i + 1) % d)] -= self.hopping;
            k[(i, (i + d - 1) % d)] -= self.hopping;
        }
        k
    }

    pub fn site_potential(&self, site: usize, t: f64) -> Result<Mat2> {
        self.potential.assemble(&[site as f64 * self.spacing], t)
    }

    /// One-body operator `h(t)` on the `2d` modes.
    pub fn one_body(&self, t: f64) -> Result<DMatrix<C64>> {
        let d = self.sites;
        let k = self.laplacian();
        let mut h = DMatrix::from_element(2 * d, 2 * d, C64::new(0.0, 0.0));
        for s in 0..2 {
            for i in 0..d {
                for j in 0..d {
                    h[(s * d + i, s * d + j)] = C64::new(k[(i, j)], 0.0);
                }
            }
        }
        for i in 0..d {
            let m = self.site_potential(i, t)?;
            for a in 0..2 {
                for b in 0..2 {
                    h[(a * d + i, b * d + i)] += m.0[a][b];
                }
            }
        }
        Ok(h)
    }

    /// `∂_t h(t)`: only the spin matrix depends on time.
    pub fn one_body_derivative(&self, t: f64) -> DMatrix<C64> {
        let d = self.sites;
        let mut h = DMatrix::from_element(2 * d, 2 * d, C64::new(0.0, 0.0));
        for i in 0..d {
            let m = self.potential.time_derivative(&[i as f64 * self.spacing], t);
            for a in 0..2 {
                for b in 0..2 {
                    h[(a * d + i, b * d + i)] = m.0[a][b];
                }
            }
        }
        h
    }

    /// Pairs `(α, β)`, `α ≠ β`, on which `h(t)` can be nonzero for some `t`.
    pub(crate) fn coupled_pairs(&self) -> Vec<(usize, usize)> {
        let d = self.sites;
        let k = self.laplacian();
        let flips = !self.potential.is_spin_diagonal();
        let mut pairs = Vec::new();
        for a in 0..2 * d {
            for b in 0..2 * d {
                if a == b {
                    continue;
                }
                let (sa, ia, sb, ib) = (a / d, a % d, b / d, b % d);
                let hop = sa == sb && k[(ia, ib)] != 0.0;
                let flip = flips && ia == ib;
                if hop || flip {
                    pairs.push((a, b));
                }
            }
        }
        pairs
    }
}

/// A one-body spinor on the lattice: `2d` amplitudes, up block then down
/// block. Normalized in the plain `ℓ²` sense.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeOrbital {
    pub amplitudes: Vec<C64>,
}

impl LatticeOrbital {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() || !amplitudes.len().is_multiple_of(2) {
            return Err(Error::Structural(format!("orbital needs an even number of modes, got {}", amplitudes.len())));
        }
        Ok(Self { amplitudes })
    }

    pub fn from_spinor(up: &[C64], down: &[C64]) -> Result<Self> {
        if up.len() != down.len() {
            return Err(Error::Structural("spin blocks differ in length".into()));
        }
        Self::new(up.iter().chain(down).copied().collect())
    }

    pub fn sites(&self) -> usize {
        self.amplitudes.len() / 2
    }

    pub fn up(&self) -> &[C64] {
        &self.amplitudes[..self.sites()]
    }

    pub fn down(&self) -> &[C64] {
        &self.amplitudes[self.sites()..]
    }

    pub fn norm2(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm2().sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Contract("cannot normalize a zero orbital".into()));
        }
        self.amplitudes.iter_mut().for_each(|z| *z /= n);
        Ok(self)
    }

    pub(crate) fn require_normalized(&self, tol: f64) -> Result<()> {
        let n2 = self.norm2();
        if (n2 - 1.0).abs() > tol {
            return Err(Error::Contract(format!("orbital must be normalized, got norm² = {n2}")));
        }
        Ok(())
    }

    pub fn as_vector(&self) -> nalgebra::DVector<C64> {
        nalgebra::DVector::from_column_slice(&self.amplitudes)
    }

    /// `⟨φ, M φ⟩` for a matrix on the mode space.
    pub fn expectation(&self, m: &DMatrix<C64>) -> C64 {
        let v = self.as_vector();
        v.dotc(&(m * &v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::RabiParams;

    fn model(d: usize) -> LatticeModel {
        LatticeModel {
            sites: d,
            spacing: 0.5,
            hopping: 1.3,
            potential: MatrixPotential::rabi_drive(RabiParams::resonant(0.4, 1.0)),
            pair_by_distance: vec![0.0; d / 2 + 1],
            scaling: ScalingMode::MeanField,
        }
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        for d in 2..=8 {
            let k = model(d).laplacian();
            for i in 0..d {
                assert!(k.row(i).sum().abs() < 1e-14);
            }
            assert_eq!(k, k.transpose());
        }
    }

    #[test]
    fn one_body_is_hermitian() {
        let h = model(5).one_body(0.7).unwrap();
        assert!((&h - h.adjoint()).norm() < 1e-14);
    }

    #[test]
    fn coupled_pairs_cover_off_diagonal_support() {
        let m = model(4);
        let pairs = m.coupled_pairs();
        for t in [0.0, 0.3, 1.1] {
            let h = m.one_body(t).unwrap();
            for a in 0..8 {
                for b in 0..8 {
                    if a != b && h[(a, b)].norm() > 0.0 {
                        assert!(pairs.contains(&(a, b)));
                    }
                }
            }
        }
    }

    #[test]
    fn ring_distances() {
        let m = model(6);
        assert_eq!(m.ring_distance(0, 5), 1);
        assert_eq!(m.ring_distance(1, 4), 3);
        assert_eq!(m.ring_distance(2, 2), 0);
    }
}
