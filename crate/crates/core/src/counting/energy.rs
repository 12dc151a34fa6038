use serde::Serialize;

use super::operator::delta_a;
use crate::error::{Error, Result};
use crate::gp::lattice::{hartree_energy, hartree_evolve};
use crate::manybody::{energy_per_particle, LatticeModel, LatticeOrbital, ManyBodyState, Propagator};
use crate::spinor::Mat2;

/// Centered differences of `E_N − E_H` around `t` compared with `δ_a(t)`.
#[derive(Clone, Debug, Serialize)]
pub struct EnergyIdentityCheck {
    pub t: f64,
    pub delta_a: f64,
    pub deltas: Vec<f64>,
    pub centered: Vec<f64>,
    pub errors: Vec<f64>,
    /// `errors[i] / errors[i + 1]`.
    pub ratios: Vec<f64>,
}

pub fn site_time_derivative(model: &LatticeModel, t: f64) -> Vec<Mat2> {
    (0..model.sites).map(|i| model.potential.time_derivative(&[i as f64 * model.spacing], t)).collect()
}

/// `psi` and `phi` are the many-body and effective states at time `t`. Each
/// offset `±δ` is reached in `substeps` equal steps so that the propagation
/// error shrinks with `δ`.
pub fn energy_identity_check(
    model: &LatticeModel,
    psi: &ManyBodyState,
    phi: &LatticeOrbital,
    t: f64,
    deltas: &[f64],
    substeps: usize,
) -> Result<EnergyIdentityCheck> {
    if deltas.is_empty() || deltas.iter().any(|d| !(*d > 0.0)) || substeps == 0 {
        return Err(Error::Config("need positive offsets and at least one substep".into()));
    }
    let target = delta_a(psi, phi, &site_time_derivative(model, t))?;
    let mut prop = Propagator::new(model, psi.basis.clone())?;
    let gap = |p: &ManyBodyState, f: &LatticeOrbital, s: f64| -> Result<f64> {
        Ok(energy_per_particle(p, model, s)? - hartree_energy(model, f, s)?)
    };
    let mut centered = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let h = d / substeps as f64;
        let mut side = [0.0; 2];
        for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
            let s = t + sign * d;
            let p = prop.advance(psi, t, s, h)?;
            let f = hartree_evolve(model, phi, t, s, h)?;
            side[k] = gap(&p, &f, s)?;
        }
        centered.push((side[0] - side[1]) / (2.0 * d));
    }
    let errors: Vec<f64> = centered.iter().map(|c| (c - target).abs()).collect();
    let ratios = errors.windows(2).map(|w| w[0] / w[1]).collect();
    Ok(EnergyIdentityCheck { t, delta_a: target, deltas: deltas.to_vec(), centered, errors, ratios })
}
