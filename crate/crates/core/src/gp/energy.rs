use num_complex::Complex64 as C64;

use super::spectral::Spectral;
use crate::error::{Error, Result};
use crate::spinor::field::require_normalized;
use crate::spinor::{MatrixPotential, SpinorField};

const PI: f64 = std::f64::consts::PI;

/// The three pieces of the two-component GP energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GpEnergyParts {
    pub kinetic: f64,
    pub interaction: f64,
    pub potential: f64,
}

impl GpEnergyParts {
    pub fn total(&self) -> f64 {
        self.kinetic + self.interaction + self.potential
    }
}

/// `∫ |∇u|² + |∇v|² + 4πa (|u|² + |v|²)² + ⟨(u,v), S(t)(u,v)⟩`.
pub fn gp_energy(f: &SpinorField, a: f64, p: &MatrixPotential, t: f64) -> Result<f64> {
    let spectral = Spectral::new(&f.grid);
    Ok(gp_energy_parts(f, a, p, t, &spectral)?.total())
}

pub(crate) fn gp_energy_parts(
    f: &SpinorField,
    a: f64,
    p: &MatrixPotential,
    t: f64,
    spectral: &Spectral,
) -> Result<GpEnergyParts> {
    require_normalized(f, 1e-8)?;
    let grid = &f.grid;
    let w = grid.cell_volume();
    let kinetic = spectral.kinetic_energy(&f.u, w) + spectral.kinetic_energy(&f.v, w);

    let mut quartic = 0.0;
    let mut pot = C64::new(0.0, 0.0);
    for i in 0..grid.len() {
        let (u, v) = (f.u[i], f.v[i]);
        let rho = u.norm_sqr() + v.norm_sqr();
        quartic += rho * rho;
        let x = grid.position(i);
        let s = p.assemble(&x[..grid.dim()], t)?;
        let (su, sv) = s.apply(u, v);
        pot += u.conj() * su + v.conj() * sv;
    }
    let pot = pot * w;
    if pot.im.abs() > 1e-10 * pot.re.abs().max(1.0) {
        return Err(Error::Contract(format!("potential energy has imaginary part {}", pot.im)));
    }
    Ok(GpEnergyParts { kinetic, interaction: 4.0 * PI * a * quartic * w, potential: pot.re })
}
