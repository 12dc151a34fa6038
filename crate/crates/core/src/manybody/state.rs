use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::basis::SymmetricBasis;
use super::hamiltonian::Hamiltonian;
use super::krylov::{expm_apply, KrylovOptions};
use super::model::{LatticeModel, LatticeOrbital};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ManyBodyState {
    pub basis: Arc<SymmetricBasis>,
    pub amplitudes: Vec<C64>,
}

impl ManyBodyState {
    pub fn new(basis: Arc<SymmetricBasis>, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != basis.dimension() {
            return Err(Error::Structural(format!(
                "{} amplitudes for a basis of dimension {}",
                amplitudes.len(),
                basis.dimension()
            )));
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn zeros(basis: Arc<SymmetricBasis>) -> Self {
        let n = basis.dimension();
        Self { basis, amplitudes: vec![C64::new(0.0, 0.0); n] }
    }

    /// `φ^{⊗N}`: amplitude `√(N!/Π n_α!) Π φ_α^{n_α}`.
    pub fn product(basis: Arc<SymmetricBasis>, phi: &LatticeOrbital) -> Result<Self> {
        if phi.amplitudes.len() != basis.n_modes() {
            return Err(Error::Structural("orbital and basis disagree on the number of modes".into()));
        }
        let fact = factorials(basis.n_particles());
        let amplitudes = basis
            .iter()
            .map(|occ| {
                let mut z = C64::new(fact[basis.n_particles()].sqrt(), 0.0);
                for (&n, p) in occ.iter().zip(&phi.amplitudes) {
                    if n > 0 {
                        z *= p.powu(n as u32) / fact[n as usize].sqrt();
                    }
                }
                z
            })
            .collect();
        Self::new(basis, amplitudes)
    }

    /// Normalized state with i.i.d. complex Gaussian amplitudes.
    pub fn random(basis: Arc<SymmetricBasis>, rng: &mut impl Rng) -> Self {
        let amplitudes =
            (0..basis.dimension()).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        let mut s = Self { basis, amplitudes };
        s.normalize().expect("a Gaussian vector is nonzero");
        s
    }

    pub fn n_particles(&self) -> usize {
        self.basis.n_particles()
    }

    pub fn norm2(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm2().sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Contract("cannot normalize a zero or non-finite state".into()));
        }
        self.amplitudes.iter_mut().for_each(|z| *z /= n);
        Ok(())
    }

    pub(crate) fn require_normalized(&self, tol: f64) -> Result<()> {
        let n2 = self.norm2();
        if (n2 - 1.0).abs() > tol {
            return Err(Error::Contract(format!("state must be normalized, got norm² = {n2}")));
        }
        Ok(())
    }

    pub fn inner(&self, other: &ManyBodyState) -> C64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn distance(&self, other: &ManyBodyState) -> f64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self { basis: self.basis.clone(), amplitudes: self.amplitudes.iter().map(|z| z * s).collect() }
    }
}

pub(crate) fn factorials(n: usize) -> Vec<f64> {
    let mut f = vec![1.0; n + 1];
    for i in 1..=n {
        f[i] = f[i - 1] * i as f64;
    }
    f
}

/// Time stepping of `i∂_tΨ = H(t)Ψ` with `H` frozen at each step midpoint.
pub struct Propagator {
    model: LatticeModel,
    hamiltonian: Hamiltonian,
    pub options: KrylovOptions,
}

impl Propagator {
    pub fn new(model: &LatticeModel, basis: Arc<SymmetricBasis>) -> Result<Self> {
        let hamiltonian = Hamiltonian::new(model, basis, 0.0)?;
        Ok(Self { model: model.clone(), hamiltonian, options: KrylovOptions::default() })
    }

    pub fn hamiltonian_at(&mut self, t: f64) -> Result<&Hamiltonian> {
        self.hamiltonian.set_time(&self.model, t)?;
        Ok(&self.hamiltonian)
    }

    /// Advances from `t0` to `t1` in equal steps no longer than `dt`; `t1 < t0`
    /// runs backward.
    pub fn advance(&mut self, psi: &ManyBodyState, t0: f64, t1: f64, dt: f64) -> Result<ManyBodyState> {
        if !Arc::ptr_eq(&psi.basis, self.hamiltonian.basis()) && *psi.basis != **self.hamiltonian.basis() {
            return Err(Error::Structural("state basis differs from propagator basis".into()));
        }
        if !(dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {dt}")));
        }
        let span = t1 - t0;
        if !span.is_finite() {
            return Err(Error::Config("time span must be finite".into()));
        }
        if span == 0.0 {
            return Ok(psi.clone());
        }
        let steps = (span.abs() / dt - 1e-9).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        let mut amps = psi.amplitudes.clone();
        for s in 0..steps {
            let t_mid = t0 + (s as f64 + 0.5) * h;
            self.hamiltonian.set_time(&self.model, t_mid)?;
            let ham = &self.hamiltonian;
            amps = expm_apply(&|x: &[C64], y: &mut [C64]| ham.apply(x, y), &amps, h, &self.options)?;
        }
        if amps.iter().any(|z| !z.is_finite()) {
            return Err(Error::BlowUp { step: steps, time: t1 });
        }
        ManyBodyState::new(psi.basis.clone(), amps)
    }
}

pub fn propagate(psi: &ManyBodyState, model: &LatticeModel, t0: f64, t1: f64, dt: f64) -> Result<ManyBodyState> {
    psi.require_normalized(1e-10)?;
    Propagator::new(model, psi.basis.clone())?.advance(psi, t0, t1, dt)
}

/// `(1/N) ⟨Ψ, H(t) Ψ⟩`.
pub fn energy_per_particle(psi: &ManyBodyState, model: &LatticeModel, t: f64) -> Result<f64> {
    psi.require_normalized(1e-10)?;
    let h = Hamiltonian::new(model, psi.basis.clone(), t)?;
    expectation_per_particle(&h, psi)
}

pub(crate) fn expectation_per_particle(h: &Hamiltonian, psi: &ManyBodyState) -> Result<f64> {
    if psi.n_particles() == 0 {
        return Err(Error::Contract("energy per particle needs at least one particle".into()));
    }
    let e = h.expectation(&psi.amplitudes);
    if e.im.abs() > 1e-12 * e.re.abs().max(1.0) {
        return Err(Error::Contract(format!("energy has imaginary residue {}", e.im)));
    }
    Ok(e.re / psi.n_particles() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manybody::model::ScalingMode;
    use crate::manybody::partial_trace;
    use crate::spinor::{MatrixPotential, RabiParams, SpatialForm};
    use nalgebra::{DMatrix, DVector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model(d: usize, v: Vec<f64>, scaling: ScalingMode) -> LatticeModel {
        LatticeModel {
            sites: d,
            spacing: 1.0,
            hopping: 1.0,
            potential: MatrixPotential::rabi_drive(RabiParams::resonant(0.8, 1.2))
                .with_traps(SpatialForm::Cosine { amplitude: 0.4, period: d as f64, phase: 0.0 }, SpatialForm::Zero),
            pair_by_distance: v,
            scaling,
        }
    }

    fn orbital(d: usize, seed: u64) -> LatticeOrbital {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..2 * d).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        LatticeOrbital::new(amps).unwrap().normalized().unwrap()
    }

    #[test]
    fn product_state_is_normalized() {
        for (d, n) in [(2, 3), (3, 4), (4, 2)] {
            let basis = Arc::new(SymmetricBasis::new(2 * d, n).unwrap());
            let s = ManyBodyState::product(basis, &orbital(d, 7)).unwrap();
            assert!((s.norm2() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn agrees_with_dense_exponential_for_static_h() {
        let mut m = model(2, vec![0.9, 0.3], ScalingMode::GrossPitaevskii);
        m.potential.b1 = crate::spinor::FieldForm::constant(0.5);
        m.potential.b2 = crate::spinor::FieldForm::zero();
        let basis = Arc::new(SymmetricBasis::new(4, 2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let psi = ManyBodyState::random(basis.clone(), &mut rng);
        let out = propagate(&psi, &m, 0.0, 1.5, 0.1).unwrap();
        let dense = Hamiltonian::new(&m, basis, 0.0).unwrap().to_dense();
        let eig = dense.symmetric_eigen();
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| C64::from_polar(1.0, -e * 1.5)));
        let u = &eig.eigenvectors * d * eig.eigenvectors.adjoint();
        let want = u * DVector::from_column_slice(&psi.amplitudes);
        let err = out.amplitudes.iter().zip(want.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn eigenvector_only_acquires_phase() {
        let mut m = model(3, vec![0.5, 0.2], ScalingMode::MeanField);
        m.potential = MatrixPotential::zero();
        let basis = Arc::new(SymmetricBasis::new(6, 2).unwrap());
        let dense = Hamiltonian::new(&m, basis.clone(), 0.0).unwrap().to_dense();
        let eig = dense.symmetric_eigen();
        let v: Vec<C64> = eig.eigenvectors.column(4).iter().copied().collect();
        let psi = ManyBodyState::new(basis, v).unwrap();
        let out = propagate(&psi, &m, 0.0, 2.0, 0.05).unwrap();
        for (a, b) in out.amplitudes.iter().zip(&psi.amplitudes) {
            assert!((a.norm() - b.norm()).abs() < 1e-12);
            assert!((a - b * C64::from_polar(1.0, -eig.eigenvalues[4] * 2.0)).norm() < 1e-10);
        }
        let e = energy_per_particle(&psi, &m, 0.0).unwrap();
        assert!((e - eig.eigenvalues[4] / 2.0).abs() < 1e-12);
    }

    #[test]
    fn norm_drift_over_many_steps() {
        let m = model(3, vec![1.0, 0.5], ScalingMode::MeanField);
        let basis = Arc::new(SymmetricBasis::new(6, 3).unwrap());
        let psi = ManyBodyState::random(basis, &mut ChaCha8Rng::seed_from_u64(2));
        let out = propagate(&psi, &m, 0.0, 10.0, 0.01).unwrap();
        assert!((out.norm2() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn second_order_in_dt_for_driven_h() {
        let m = model(2, vec![0.6, 0.2], ScalingMode::MeanField);
        let basis = Arc::new(SymmetricBasis::new(4, 3).unwrap());
        let psi = ManyBodyState::product(basis, &orbital(2, 5)).unwrap();
        let runs: Vec<ManyBodyState> =
            [0.04, 0.02, 0.01].iter().map(|&dt| propagate(&psi, &m, 0.0, 1.0, dt).unwrap()).collect();
        let ratio = runs[0].distance(&runs[1]) / runs[1].distance(&runs[2]);
        assert!((3.5..4.5).contains(&ratio), "{ratio}");
    }

    #[test]
    fn free_product_energy_is_one_body_energy() {
        let mut m = model(4, vec![0.0; 3], ScalingMode::GrossPitaevskii);
        m.potential.trap_down = SpatialForm::Harmonic { strength: 0.1, center: vec![] };
        let phi = orbital(4, 11);
        let h1 = phi.expectation(&m.one_body(0.3).unwrap()).re;
        for n in 1..=4 {
            let basis = Arc::new(SymmetricBasis::new(8, n).unwrap());
            let psi = ManyBodyState::product(basis, &phi).unwrap();
            assert!((energy_per_particle(&psi, &m, 0.3).unwrap() - h1).abs() < 1e-12);
        }
    }

    #[test]
    fn mean_field_product_interaction() {
        let v = vec![1.3, 0.4, 0.25];
        let mut m = model(4, v, ScalingMode::MeanField);
        m.potential = MatrixPotential::zero();
        m.hopping = 1.0;
        let phi = orbital(4, 12);
        let rho: Vec<f64> = (0..4).map(|i| phi.up()[i].norm_sqr() + phi.down()[i].norm_sqr()).collect();
        let vm = m.pair_matrix();
        let mut half_vv = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                half_vv += 0.5 * vm[(i, j)] * rho[i] * rho[j];
            }
        }
        let kin = phi.expectation(&m.one_body(0.0).unwrap()).re;
        for n in 2..=5 {
            let basis = Arc::new(SymmetricBasis::new(8, n).unwrap());
            let psi = ManyBodyState::product(basis, &phi).unwrap();
            let e = energy_per_particle(&psi, &m, 0.0).unwrap();
            assert!((e - kin - half_vv).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn spin_diagonal_dynamics_keeps_spin_up() {
        let mut m = model(3, vec![0.7, 0.3], ScalingMode::MeanField);
        m.potential = MatrixPotential::zero()
            .with_traps(SpatialForm::Harmonic { strength: 0.3, center: vec![1.0] }, SpatialForm::Zero);
        let mut amps = vec![C64::new(0.0, 0.0); 6];
        amps[0] = C64::new(0.6, 0.0);
        amps[1] = C64::new(0.0, 0.8);
        let phi = LatticeOrbital::new(amps).unwrap();
        let basis = Arc::new(SymmetricBasis::new(6, 3).unwrap());
        let psi = ManyBodyState::product(basis, &phi).unwrap();
        let out = propagate(&psi, &m, 0.0, 3.0, 0.05).unwrap();
        let g = partial_trace(&out).unwrap();
        let down: f64 = (3..6).map(|a| g.matrix[(a, a)].re).sum();
        assert!(down.abs() < 1e-12);
    }
}
