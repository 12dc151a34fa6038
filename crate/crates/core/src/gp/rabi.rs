use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spinor::{Grid, RabiParams, SpinorField};

/// Closed-form resonant Rabi solution starting from `(u0, 0)`:
/// `u = e^{iωt/2} cos(Ωt) u0`, `v = −i e^{−iωt/2} sin(Ωt) u0`.
///
/// Exact for the linear equation when the orbital does not move in space
/// (e.g. a uniform `u0` without trap); the caller decides when that holds.
pub fn rabi_reference(grid: &Grid, u0: &[C64], rabi: &RabiParams, t: f64) -> Result<SpinorField> {
    if !rabi.is_resonant() {
        return Err(Error::Unsupported(format!(
            "closed form needs V_hf = ω/2, got V_hf = {} and ω = {}",
            rabi.v_hf_const, rabi.omega_drive
        )));
    }
    if u0.len() != grid.len() {
        return Err(Error::Structural(format!("orbital has {} samples, grid has {}", u0.len(), grid.len())));
    }
    let (w, omega) = (rabi.omega_drive, rabi.omega_rabi);
    let cu = C64::from_polar(1.0, 0.5 * w * t) * (omega * t).cos();
    let cv = C64::new(0.0, -1.0) * C64::from_polar(1.0, -0.5 * w * t) * (omega * t).sin();
    SpinorField::new(grid.clone(), u0.iter().map(|z| z * cu).collect(), u0.iter().map(|z| z * cv).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp::{evolve_final, GPParams};
    use crate::spinor::MatrixPotential;

    #[test]
    fn full_transfer_at_quarter_period() {
        let g = Grid::cubic(1, 4, 1.0).unwrap();
        let u0 = vec![C64::new(1.0, 0.0); 4];
        let omega = 1.3;
        let t = std::f64::consts::FRAC_PI_2 / omega;
        let f = rabi_reference(&g, &u0, &RabiParams::resonant(omega, 2.0), t).unwrap();
        let (pu, pv) = f.populations();
        assert!(pu < 1e-28 && (pv - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_detuning() {
        let g = Grid::cubic(1, 4, 1.0).unwrap();
        let r = RabiParams { omega_rabi: 1.0, omega_drive: 2.0, v_hf_const: 0.9 };
        assert!(matches!(rabi_reference(&g, &[C64::new(1.0, 0.0); 4], &r, 1.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn matches_split_step_for_uniform_orbital() {
        let g = Grid::cubic(1, 8, 1.0).unwrap();
        let u0 = vec![C64::new(1.0, 0.0); 8];
        let rabi = RabiParams::resonant(0.7, 3.0);
        let f0 = SpinorField::new(g.clone(), u0.clone(), vec![C64::new(0.0, 0.0); 8]).unwrap();
        let p = GPParams { scattering_length: 0.0, potential: MatrixPotential::rabi_drive(rabi), dt: 1e-3, t_end: 1.0 };
        let num = evolve_final(&f0, &p).unwrap();
        let exact = rabi_reference(&g, &u0, &rabi, 1.0).unwrap();
        let err = num
            .u
            .iter()
            .zip(&exact.u)
            .chain(num.v.iter().zip(&exact.v))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
    }
}
