use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::frame::{CondensateProjector, Frame};
use super::weight::WeightFunction;
use crate::error::{Error, Result};
use crate::manybody::{energy_per_particle, partial_trace, LatticeModel, LatticeOrbital, ManyBodyState};
use crate::spinor::Mat2;

/// `f̂_d = Σ_k f(k + d) P_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct CountingOperator {
    pub weight: WeightFunction,
    pub shift: i64,
    pub projector: CondensateProjector,
}

impl CountingOperator {
    pub fn new(weight: WeightFunction, projector: CondensateProjector) -> Self {
        Self { weight, shift: 0, projector }
    }

    pub fn shifted(mut self, d: i64) -> Self {
        self.shift += d;
        self
    }

    pub fn coefficient(&self, k: usize) -> f64 {
        self.weight.value(k as i64 + self.shift)
    }

    pub fn op_norm(&self) -> f64 {
        (0..=self.projector.n_particles).map(|k| self.coefficient(k).abs()).fold(0.0, f64::max)
    }
}

fn frame_for(psi: &ManyBodyState, proj: &CondensateProjector) -> Result<Frame> {
    Frame::new(proj, psi.basis.clone())
}

fn rebuild(psi: &ManyBodyState, amplitudes: Vec<C64>) -> ManyBodyState {
    ManyBodyState { basis: Arc::clone(&psi.basis), amplitudes }
}

/// `P_k ψ`; zero for `k` outside `0..=N`.
pub fn apply_pk(psi: &ManyBodyState, proj: &CondensateProjector, k: i64) -> Result<ManyBodyState> {
    let frame = frame_for(psi, proj)?;
    Ok(rebuild(psi, frame.apply_weights(&psi.amplitudes, |j| if j as i64 == k { 1.0 } else { 0.0 })))
}

pub fn apply_counting(psi: &ManyBodyState, op: &CountingOperator) -> Result<ManyBodyState> {
    let frame = frame_for(psi, &op.projector)?;
    Ok(rebuild(psi, frame.apply_weights(&psi.amplitudes, |k| op.coefficient(k))))
}

/// `⟨ψ, f̂ ψ⟩ = Σ_k f(k) ‖P_k ψ‖²`.
pub fn counting_expectation(psi: &ManyBodyState, op: &CountingOperator) -> Result<f64> {
    let dist = frame_for(psi, &op.projector)?.excitation_distribution(&psi.amplitudes);
    Ok(dist.iter().enumerate().map(|(k, w)| op.coefficient(k) * w).sum())
}

/// `1 − ⟨φ, γ φ⟩`.
pub fn alpha_tilde(psi: &ManyBodyState, orbital: &LatticeOrbital) -> Result<f64> {
    orbital.require_normalized(1e-12)?;
    if orbital.amplitudes.len() != psi.basis.n_modes() {
        return Err(Error::Structural("orbital and state disagree on the number of modes".into()));
    }
    Ok(1.0 - partial_trace(psi)?.overlap(orbital))
}

/// `⟨ψ, n̂² ψ⟩ = Σ_k (k/N) ‖P_k ψ‖²`, the counting route to [`alpha_tilde`].
pub fn n_squared_expectation(psi: &ManyBodyState, orbital: &LatticeOrbital) -> Result<f64> {
    psi.require_normalized(1e-10)?;
    let n = psi.n_particles();
    if n == 0 {
        return Err(Error::Contract("counting needs at least one particle".into()));
    }
    let proj = CondensateProjector::new(orbital.clone(), n)?;
    let dist = frame_for(psi, &proj)?.excitation_distribution(&psi.amplitudes);
    Ok(dist.iter().enumerate().map(|(k, w)| k as f64 / n as f64 * w).sum())
}

/// `⟨ψ, m̂ ψ⟩ + |E_N[ψ] − E|` with `E_N` per particle at time `t`.
pub fn alpha_less(
    psi: &ManyBodyState,
    orbital: &LatticeOrbital,
    model: &LatticeModel,
    gp_energy_value: f64,
    xi: f64,
    t: f64,
) -> Result<f64> {
    let (m, gap) = alpha_less_parts(psi, orbital, model, gp_energy_value, xi, t)?;
    Ok(m + gap)
}

pub(crate) fn alpha_less_parts(
    psi: &ManyBodyState,
    orbital: &LatticeOrbital,
    model: &LatticeModel,
    gp_energy_value: f64,
    xi: f64,
    t: f64,
) -> Result<(f64, f64)> {
    psi.require_normalized(1e-10)?;
    if !(xi > 0.0 && xi < 0.5) {
        return Err(Error::Config(format!("ξ must lie in (0, 1/2), got {xi}")));
    }
    let n = psi.n_particles();
    let proj = CondensateProjector::new(orbital.clone(), n)?;
    let m = counting_expectation(psi, &CountingOperator::new(WeightFunction::m(n, xi), proj))?;
    let e = energy_per_particle(psi, model, t)?;
    Ok((m, (e - gp_energy_value).abs()))
}

/// Spin-space derivative per site as a one-body operator on the `2d` modes.
pub fn site_blocks_to_modes(blocks: &[Mat2]) -> DMatrix<C64> {
    let d = blocks.len();
    let mut h = DMatrix::from_element(2 * d, 2 * d, C64::new(0.0, 0.0));
    for (i, m) in blocks.iter().enumerate() {
        for a in 0..2 {
            for b in 0..2 {
                h[(a * d + i, b * d + i)] = m.0[a][b];
            }
        }
    }
    h
}

/// `⟨ψ, Ṡ(x₁) ψ⟩ − ⟨φ, Ṡ φ⟩` for per-site Hermitian `Ṡ`.
pub fn delta_a(psi: &ManyBodyState, orbital: &LatticeOrbital, s_dot: &[Mat2]) -> Result<f64> {
    if 2 * s_dot.len() != psi.basis.n_modes() || orbital.amplitudes.len() != psi.basis.n_modes() {
        return Err(Error::Structural("Ṡ, orbital and state disagree on the number of sites".into()));
    }
    if let Some(m) = s_dot.iter().find(|m| m.hermiticity_defect() > 1e-12) {
        return Err(Error::Contract(format!("Ṡ must be Hermitian, defect {}", m.hermiticity_defect())));
    }
    orbital.require_normalized(1e-10)?;
    let h = site_blocks_to_modes(s_dot);
    let gamma = partial_trace(psi)?;
    let many = (&gamma.matrix * &h).trace().re;
    Ok(many - orbital.expectation(&h).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::frame::tests::random_orbital;
    use crate::manybody::SymmetricBasis;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(m: usize, n: usize, seed: u64) -> (ChaCha8Rng, Arc<SymmetricBasis>, CondensateProjector) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = Arc::new(SymmetricBasis::new(m, n).unwrap());
        let proj = CondensateProjector::new(random_orbital(m, &mut rng), n).unwrap();
        (rng, basis, proj)
    }

    #[test]
    fn projector_is_idempotent_and_complementary() {
        let (_, _, proj) = setup(6, 3, 1);
        let (p, q) = (proj.p(), proj.q());
        assert!((&p * &p - &p).camax() < 1e-13);
        assert!((&q * &q - &q).camax() < 1e-13);
        assert!((&p * &q).camax() < 1e-13);
    }

    #[test]
    fn pk_resolves_identity() {
        let (mut rng, basis, proj) = setup(6, 4, 2);
        for _ in 0..20 {
            let psi = ManyBodyState::random(basis.clone(), &mut rng);
            let mut sum = ManyBodyState::zeros(basis.clone());
            let mut total = 0.0;
            for k in 0..=4 {
                let pk = apply_pk(&psi, &proj, k).unwrap();
                total += pk.norm2();
                sum.amplitudes.iter_mut().zip(&pk.amplitudes).for_each(|(a, b)| *a += b);
                let again = apply_pk(&pk, &proj, k).unwrap();
                assert!(again.distance(&pk) < 1e-12);
            }
            assert!((total - 1.0).abs() < 1e-12);
            assert!(sum.distance(&psi) < 1e-12);
            assert!(apply_pk(&psi, &proj, -1).unwrap().norm2() == 0.0);
            assert!(apply_pk(&psi, &proj, 5).unwrap().norm2() == 0.0);
        }
    }

    #[test]
    fn condensate_has_no_excitations() {
        let (_, basis, proj) = setup(4, 3, 3);
        let psi = ManyBodyState::product(basis, &proj.orbital).unwrap();
        assert!(apply_pk(&psi, &proj, 0).unwrap().distance(&psi) < 1e-13);
        for k in 1..=3 {
            assert!(apply_pk(&psi, &proj, k).unwrap().norm2() < 1e-26);
        }
        assert!(alpha_tilde(&psi, &proj.orbital).unwrap().abs() < 1e-13);
    }

    #[test]
    fn counting_operators_commute_and_multiply() {
        let (mut rng, basis, proj) = setup(6, 3, 4);
        let f = CountingOperator::new(WeightFunction::custom(vec![0.3, -1.2, 2.0, 0.7]), proj.clone());
        let g = CountingOperator::new(WeightFunction::m(3, 0.1), proj.clone());
        let fg: Vec<f64> = (0..=3).map(|k| f.coefficient(k) * g.coefficient(k)).collect();
        let prod = CountingOperator::new(WeightFunction::custom(fg), proj);
        let psi = ManyBodyState::random(basis.clone(), &mut rng);
        let phi = ManyBodyState::random(basis, &mut rng);
        let a = apply_counting(&apply_counting(&psi, &g).unwrap(), &f).unwrap();
        let b = apply_counting(&apply_counting(&psi, &f).unwrap(), &g).unwrap();
        let c = apply_counting(&psi, &prod).unwrap();
        assert!(a.distance(&b) < 1e-12 && a.distance(&c) < 1e-12);
        let lhs = phi.inner(&apply_counting(&psi, &f).unwrap());
        let rhs = apply_counting(&phi, &f).unwrap().inner(&psi);
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn unit_weight_is_identity() {
        let (mut rng, basis, proj) = setup(4, 3, 5);
        let psi = ManyBodyState::random(basis, &mut rng);
        let one = CountingOperator::new(WeightFunction::custom(vec![1.0; 4]), proj);
        assert!(apply_counting(&psi, &one).unwrap().distance(&psi) < 1e-13);
    }

    #[test]
    fn alpha_tilde_routes_agree_and_single_excitation_gives_one_over_n() {
        let (mut rng, basis, proj) = setup(6, 4, 6);
        for _ in 0..20 {
            let psi = ManyBodyState::random(basis.clone(), &mut rng);
            let a = alpha_tilde(&psi, &proj.orbital).unwrap();
            let b = n_squared_expectation(&psi, &proj.orbital).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
        // orthonormal pair: φ = e₀, χ = e₁ gives the state |N−1, 1, 0…⟩
        let mut e0 = vec![C64::new(0.0, 0.0); 6];
        e0[0] = C64::new(1.0, 0.0);
        let phi = LatticeOrbital::new(e0).unwrap();
        let mut amps = vec![C64::new(0.0, 0.0); basis.dimension()];
        amps[basis.index_of(&[3, 1, 0, 0, 0, 0]).unwrap()] = C64::new(1.0, 0.0);
        let psi = ManyBodyState::new(basis, amps).unwrap();
        assert!((alpha_tilde(&psi, &phi).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn alpha_tilde_ignores_global_phases() {
        let (mut rng, basis, proj) = setup(6, 3, 7);
        let psi = ManyBodyState::random(basis, &mut rng);
        let a = alpha_tilde(&psi, &proj.orbital).unwrap();
        let z = C64::from_polar(1.0, 0.7);
        let rotated = LatticeOrbital::new(proj.orbital.amplitudes.iter().map(|x| x * z.conj()).collect()).unwrap();
        let b = alpha_tilde(&psi.scaled(z), &rotated).unwrap();
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn unnormalized_orbital_is_rejected() {
        let (mut rng, basis, mut proj) = setup(4, 2, 8);
        proj.orbital.amplitudes[0] *= 2.0;
        let psi = ManyBodyState::random(basis, &mut rng);
        assert!(matches!(apply_pk(&psi, &proj, 0), Err(Error::Contract(_))));
    }

    #[test]
    fn delta_a_vanishes_on_condensates_and_for_static_drive() {
        let (mut rng, basis, proj) = setup(6, 3, 9);
        let blocks = vec![Mat2::pauli_x().scale(C64::new(0.4, 0.0)) + Mat2::pauli_z(); 3];
        let product = ManyBodyState::product(basis.clone(), &proj.orbital).unwrap();
        assert!(delta_a(&product, &proj.orbital, &blocks).unwrap().abs() < 1e-13);
        let psi = ManyBodyState::random(basis, &mut rng);
        let zero = vec![Mat2::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)); 3];
        assert_eq!(delta_a(&psi, &proj.orbital, &zero).unwrap(), 0.0);
        assert!(delta_a(&psi, &proj.orbital, &blocks).unwrap().abs() > 1e-6);
    }
}
