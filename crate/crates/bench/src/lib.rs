//! Shared fixtures for the criterion benchmarks.

use std::sync::Arc;

use spinor_gp_core::counting::CondensateProjector;
use spinor_gp_core::gp::GPParams;
use spinor_gp_core::manybody::{LatticeModel, LatticeOrbital, ManyBodyState, ScalingMode, SymmetricBasis};
use spinor_gp_core::num_complex::Complex64 as C64;
use spinor_gp_core::spinor::{Grid, MatrixPotential, RabiParams, SpatialForm, SpinorField};

pub fn trapped_field(dim: usize, points: usize) -> SpinorField {
    let grid = Grid::cubic(dim, points, 16.0).unwrap();
    let mut f = SpinorField::from_fn(
        grid,
        |x| C64::new((-x.iter().map(|v| v * v).sum::<f64>() / 2.0).exp(), 0.0),
        |x| C64::new(0.3 * (-x.iter().map(|v| (v - 0.5).powi(2)).sum::<f64>()).exp(), 0.0),
    );
    f.normalize().unwrap();
    f
}

pub fn driven_params(dt: f64) -> GPParams {
    GPParams {
        scattering_length: 0.05,
        potential: MatrixPotential::rabi_drive(RabiParams::resonant(1.0, 2.0))
            .with_traps(SpatialForm::Harmonic { strength: 0.25, center: vec![] }, SpatialForm::Zero),
        dt,
        t_end: dt,
    }
}

pub fn ring_model(sites: usize) -> LatticeModel {
    LatticeModel {
        sites,
        spacing: 1.0,
        hopping: 1.0,
        potential: MatrixPotential::rabi_drive(RabiParams::resonant(1.0, 1.0)),
        pair_by_distance: (0..=sites / 2).map(|d| 1.0 / (1 + d) as f64).collect(),
        scaling: ScalingMode::MeanField,
    }
}

/// Deterministic, non-degenerate orbital on `modes` modes.
pub fn orbital(modes: usize) -> LatticeOrbital {
    let amps = (0..modes).map(|a| C64::new(1.0 + 0.3 * a as f64, (0.7 * a as f64).sin())).collect();
    LatticeOrbital::new(amps).unwrap().normalized().unwrap()
}

pub fn product_state(sites: usize, n: usize) -> ManyBodyState {
    let basis = Arc::new(SymmetricBasis::new(2 * sites, n).unwrap());
    ManyBodyState::product(basis, &orbital(2 * sites)).unwrap()
}

pub fn projector(sites: usize, n: usize) -> CondensateProjector {
    let mut amps = orbital(2 * sites).amplitudes;
    amps.reverse();
    let phi = LatticeOrbital::new(amps).unwrap().normalized().unwrap();
    CondensateProjector::new(phi, n).unwrap()
}
