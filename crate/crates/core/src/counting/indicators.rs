use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::frame::CondensateProjector;
use super::operator::alpha_less_parts;
use super::slots::{inner, norm, SlotFrame, SlotSpace};
use super::weight::{build_m_variants, WeightFunction};
use crate::error::{Error, Result};
use crate::manybody::{LatticeModel, LatticeOrbital, ManyBodyState};
use crate::scattering::ShellConstruction;

/// A radial function sampled at ring separations `0..=d/2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RingSampling {
    pub values: Vec<f64>,
    /// How separations below the lattice spacing were handled.
    pub method: String,
}

fn ring_distance(sites: usize, i: usize, j: usize) -> usize {
    let d = i.abs_diff(j);
    d.min(sites - d)
}

impl RingSampling {
    pub fn zero(sites: usize) -> Self {
        Self { values: vec![0.0; sites / 2 + 1], method: "zero".into() }
    }

    pub fn sites(&self, sites: usize) -> Result<usize> {
        if self.values.len() != sites / 2 + 1 {
            return Err(Error::Structural(format!("{} samples for a ring of {sites} sites", self.values.len())));
        }
        Ok(sites)
    }

    /// `(Σ_x g(x)²)^{1/2}` over the ring.
    pub fn l2_norm(&self, sites: usize) -> f64 {
        (0..sites).map(|x| self.values[ring_distance(sites, 0, x)].powi(2)).sum::<f64>().sqrt()
    }

    /// `g(x₁ − x₂)` as a diagonal two-body operator on the `2d` spin modes.
    pub fn pair_operator(&self, sites: usize) -> DMatrix<C64> {
        let m = 2 * sites;
        let mut g = DMatrix::from_element(m * m, m * m, C64::new(0.0, 0.0));
        for a in 0..m {
            for b in 0..m {
                g[(a * m + b, a * m + b)] = C64::new(self.values[ring_distance(sites, a % sites, b % sites)], 0.0);
            }
        }
        g
    }
}

/// `g_β` at ring node separations `k·spacing`; the on-site value is `g_β(0)`.
pub fn sample_g_on_ring(shell: &ShellConstruction, sites: usize, spacing: f64) -> Result<RingSampling> {
    let values = (0..=sites / 2).map(|k| shell.g_value(k as f64 * spacing)).collect::<Result<_>>()?;
    Ok(RingSampling { values, method: "nearest_node".into() })
}

/// `‖g(x₁ − x₂) p₂‖_op` on the lattice: the square root of
/// `max_{x₁} Σ_{x₂} g(x₁ − x₂)² (|u(x₂)|² + |v(x₂)|²)`.
pub fn dressed_norm(g: &RingSampling, orbital: &LatticeOrbital) -> Result<f64> {
    let d = g.sites(orbital.sites())?;
    let density: Vec<f64> = (0..d).map(|x| orbital.up()[x].norm_sqr() + orbital.down()[x].norm_sqr()).collect();
    let worst = (0..d)
        .map(|x1| (0..d).map(|x2| g.values[ring_distance(d, x1, x2)].powi(2) * density[x2]).sum::<f64>())
        .fold(0.0, f64::max);
    Ok(worst.sqrt())
}

/// `√2 ‖g‖₂ (‖u‖_∞ + ‖v‖_∞)`.
pub fn dressed_bound(g: &RingSampling, orbital: &LatticeOrbital) -> Result<f64> {
    let d = g.sites(orbital.sites())?;
    let sup = |xs: &[C64]| xs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(2f64.sqrt() * g.l2_norm(d) * (sup(orbital.up()) + sup(orbital.down())))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaFull {
    pub alpha: f64,
    pub alpha_less: f64,
    pub m_expectation: f64,
    pub energy_gap: f64,
    /// `N(N−1) Re⟨ψ, g(x₁−x₂) R₁₂ ψ⟩`.
    pub correction: f64,
    /// Imaginary part of the same inner product, dropped from `alpha`.
    pub discarded_imaginary: f64,
    /// `|α − α<|`.
    pub gap: f64,
    /// `N² (‖g p₁‖ + ‖p₂ g‖)(‖m̂^a‖ + ‖m̂^b‖)`.
    pub bound: f64,
    pub g_sampling: String,
}

#[allow(clippy::too_many_arguments)]
pub fn alpha_full(
    psi: &ManyBodyState,
    orbital: &LatticeOrbital,
    model: &LatticeModel,
    gp_energy_value: f64,
    xi: f64,
    t: f64,
    g: &RingSampling,
) -> Result<AlphaFull> {
    g.sites(model.sites)?;
    let (m_expectation, energy_gap) = alpha_less_parts(psi, orbital, model, gp_energy_value, xi, t)?;
    let n = psi.n_particles();
    let weight = WeightFunction::m(n, xi);
    let proj = CondensateProjector::new(orbital.clone(), n)?;
    let sf = SlotFrame::new(&proj, psi.basis.clone())?;
    let slots = sf.to_slots(psi);
    let r = sf.apply_r12(&slots, &weight)?;
    let gr = sf.slots.apply_two_body(&r, &sf.two_body(&g.pair_operator(model.sites)));
    let raw = inner(&slots, &gr) * (n * (n - 1)) as f64;
    let [ma, mb, ..] = build_m_variants(&weight)?;
    let bound = (n * n) as f64 * 2.0 * dressed_norm(g, orbital)? * (ma.sup_on_range() + mb.sup_on_range());
    let alpha_less = m_expectation + energy_gap;
    let alpha = alpha_less - raw.re;
    Ok(AlphaFull {
        alpha,
        alpha_less,
        m_expectation,
        energy_gap,
        correction: raw.re,
        discarded_imaginary: raw.im,
        gap: (alpha - alpha_less).abs(),
        bound,
        g_sampling: g.method.clone(),
    })
}

/// `(‖V(x₁−x₂) ψ‖, ‖p₁ V(x₁−x₂) ψ‖)` for a pair potential given by ring distance.
pub fn potential_norms(psi: &ManyBodyState, orbital: &LatticeOrbital, v: &RingSampling) -> Result<(f64, f64)> {
    let d = v.sites(orbital.sites())?;
    if psi.basis.n_modes() != 2 * d {
        return Err(Error::Structural("orbital and state disagree on the number of modes".into()));
    }
    let slots = SlotSpace::new(psi.basis.clone())?;
    let vpsi = slots.apply_two_body(&slots.embed(&psi.amplitudes), &v.pair_operator(d));
    let p = CondensateProjector::new(orbital.clone(), psi.n_particles())?.p();
    let pvpsi = slots.apply_one_body(&vpsi, 0, &p);
    Ok((norm(&vpsi), norm(&pvpsi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::frame::tests::random_orbital;
    use crate::counting::weight::DEFAULT_XI;
    use crate::manybody::{energy_per_particle, ScalingMode, SymmetricBasis};
    use crate::spinor::MatrixPotential;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn model() -> LatticeModel {
        LatticeModel {
            sites: 3,
            spacing: 1.0,
            hopping: 1.0,
            potential: MatrixPotential::zero(),
            pair_by_distance: vec![1.0, 0.2],
            scaling: ScalingMode::MeanField,
        }
    }

    #[test]
    fn dressed_norm_matches_dense_operator_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let phi = random_orbital(8, &mut rng);
        let g = RingSampling { values: vec![0.9, -0.3, 0.1], method: "test".into() };
        let v = phi.as_vector();
        let p = &v * v.adjoint();
        let id = DMatrix::<C64>::identity(8, 8);
        let op = g.pair_operator(4) * id.kronecker(&p);
        let dense = op.singular_values().max();
        let lattice = dressed_norm(&g, &phi).unwrap();
        assert!((dense - lattice).abs() < 1e-12, "{dense} {lattice}");
        assert!(lattice <= dressed_bound(&g, &phi).unwrap());
    }

    #[test]
    fn zero_g_leaves_alpha_less() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let basis = Arc::new(SymmetricBasis::new(6, 3).unwrap());
        let phi = random_orbital(6, &mut rng);
        let psi = ManyBodyState::random(basis, &mut rng);
        let m = model();
        let a = alpha_full(&psi, &phi, &m, 0.3, DEFAULT_XI, 0.0, &RingSampling::zero(3)).unwrap();
        assert_eq!(a.alpha, a.alpha_less);
        assert_eq!(a.correction, 0.0);
    }

    #[test]
    fn correction_respects_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let basis = Arc::new(SymmetricBasis::new(6, 4).unwrap());
        let g = RingSampling { values: vec![0.5, 0.05], method: "test".into() };
        let m = model();
        for _ in 0..10 {
            let phi = random_orbital(6, &mut rng);
            let psi = ManyBodyState::random(basis.clone(), &mut rng);
            let a = alpha_full(&psi, &phi, &m, 0.0, DEFAULT_XI, 0.0, &g).unwrap();
            assert!(a.gap <= a.bound, "{} {}", a.gap, a.bound);
        }
    }

    #[test]
    fn condensate_at_its_energy_gives_m_at_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let basis = Arc::new(SymmetricBasis::new(6, 5).unwrap());
        let phi = random_orbital(6, &mut rng);
        let psi = ManyBodyState::product(basis, &phi).unwrap();
        let m = model();
        let e = energy_per_particle(&psi, &m, 0.0).unwrap();
        let a = alpha_full(&psi, &phi, &m, e, DEFAULT_XI, 0.0, &RingSampling::zero(3)).unwrap();
        assert!((a.alpha_less - 0.5 * 5f64.powf(-DEFAULT_XI)).abs() < 1e-12);
        assert_eq!(a.energy_gap, 0.0);
    }

    #[test]
    fn potential_norm_of_product_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let basis = Arc::new(SymmetricBasis::new(6, 3).unwrap());
        let phi = random_orbital(6, &mut rng);
        let psi = ManyBodyState::product(basis, &phi).unwrap();
        let v = RingSampling { values: vec![2.0, 0.0], method: "test".into() };
        let (a, b) = potential_norms(&psi, &phi, &v).unwrap();
        // two independent particles: ‖V ψ‖² = 4 Σ_x ρ(x)²
        let rho: Vec<f64> = (0..3).map(|x| phi.up()[x].norm_sqr() + phi.down()[x].norm_sqr()).collect();
        let want = 2.0 * rho.iter().map(|r| r * r).sum::<f64>().sqrt();
        assert!((a - want).abs() < 1e-12);
        assert!(b <= a + 1e-15);
    }
}
