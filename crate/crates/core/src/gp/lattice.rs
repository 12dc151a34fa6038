//! Lattice effective equation `i∂_t φ = (h(t) + V∗ρ) φ`, `ρ_i = |φ_↑,i|² + |φ_↓,i|²`,
//! the Hartree counterpart of the many-body ring model.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::manybody::{LatticeModel, LatticeOrbital};

fn site_density(phi: &LatticeOrbital) -> Vec<f64> {
    phi.up().iter().zip(phi.down()).map(|(u, v)| u.norm_sqr() + v.norm_sqr()).collect()
}

fn mean_field(v: &DMatrix<f64>, rho: &[f64]) -> Vec<f64> {
    (0..rho.len()).map(|i| (0..rho.len()).map(|j| v[(i, j)] * rho[j]).sum()).collect()
}

fn rhs(h: &DMatrix<C64>, v: &DMatrix<f64>, phi: &[C64]) -> Vec<C64> {
    let d = phi.len() / 2;
    let rho: Vec<f64> = (0..d).map(|i| phi[i].norm_sqr() + phi[d + i].norm_sqr()).collect();
    let w = mean_field(v, &rho);
    (0..phi.len())
        .map(|a| {
            let hp: C64 = (0..phi.len()).map(|b| h[(a, b)] * phi[b]).sum();
            (hp + phi[a] * w[a % d]) * C64::new(0.0, -1.0)
        })
        .collect()
}

/// Classical fourth-order Runge–Kutta from `t0` to `t1` in equal steps no
/// longer than `dt`; `t1 < t0` runs backward.
pub fn hartree_evolve(
    model: &LatticeModel,
    phi0: &LatticeOrbital,
    t0: f64,
    t1: f64,
    dt: f64,
) -> Result<LatticeOrbital> {
    model.validate()?;
    if phi0.sites() != model.sites {
        return Err(Error::Structural("orbital and model disagree on the number of sites".into()));
    }
    if !(dt > 0.0) || !(t1 - t0).is_finite() {
        return Err(Error::Config("need dt > 0 and a finite time span".into()));
    }
    let v = model.pair_matrix();
    let span = t1 - t0;
    let steps = ((span.abs() / dt - 1e-9).ceil().max(0.0)) as usize;
    let mut y = phi0.amplitudes.clone();
    if steps == 0 {
        return Ok(phi0.clone());
    }
    let h = span / steps as f64;
    let axpy = |y: &[C64], k: &[C64], s: f64| -> Vec<C64> { y.iter().zip(k).map(|(a, b)| a + b * s).collect() };
    for s in 0..steps {
        let t = t0 + s as f64 * h;
        let h0 = model.one_body(t)?;
        let hm = model.one_body(t + 0.5 * h)?;
        let h1 = model.one_body(t + h)?;
        let k1 = rhs(&h0, &v, &y);
        let k2 = rhs(&hm, &v, &axpy(&y, &k1, 0.5 * h));
        let k3 = rhs(&hm, &v, &axpy(&y, &k2, 0.5 * h));
        let k4 = rhs(&h1, &v, &axpy(&y, &k3, h));
        for i in 0..y.len() {
            y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
        if y.iter().any(|z| !z.is_finite()) {
            return Err(Error::BlowUp { step: s + 1, time: t + h });
        }
    }
    LatticeOrbital::new(y)
}

/// `⟨φ, h(t) φ⟩ + ½ Σ_ij V_ij ρ_i ρ_j`.
pub fn hartree_energy(model: &LatticeModel, phi: &LatticeOrbital, t: f64) -> Result<f64> {
    let one = phi.expectation(&model.one_body(t)?).re;
    let rho = site_density(phi);
    let w = mean_field(&model.pair_matrix(), &rho);
    Ok(one + 0.5 * rho.iter().zip(&w).map(|(r, x)| r * x).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manybody::ScalingMode;
    use crate::spinor::{MatrixPotential, RabiParams};

    fn model() -> LatticeModel {
        LatticeModel {
            sites: 4,
            spacing: 1.0,
            hopping: 1.0,
            potential: MatrixPotential::rabi_drive(RabiParams::resonant(0.7, 1.1)),
            pair_by_distance: vec![1.0, 0.4, 0.2],
            scaling: ScalingMode::MeanField,
        }
    }

    fn start() -> LatticeOrbital {
        let amps = (0..8).map(|a| C64::new(1.0 + 0.1 * a as f64, 0.2 * (a as f64).sin())).collect();
        LatticeOrbital::new(amps).unwrap().normalized().unwrap()
    }

    #[test]
    fn conserves_norm() {
        let out = hartree_evolve(&model(), &start(), 0.0, 2.0, 1e-3).unwrap();
        assert!((out.norm2() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn fourth_order() {
        let m = model();
        let run = |dt| hartree_evolve(&m, &start(), 0.0, 1.0, dt).unwrap();
        let (a, b, c) = (run(0.04), run(0.02), run(0.01));
        let diff = |x: &LatticeOrbital, y: &LatticeOrbital| {
            x.amplitudes.iter().zip(&y.amplitudes).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt()
        };
        let ratio = diff(&a, &b) / diff(&b, &c);
        assert!((13.0..19.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn energy_conserved_for_static_drive() {
        let mut m = model();
        m.potential = MatrixPotential::zero();
        m.potential.b1 = crate::spinor::FieldForm::constant(0.6);
        let phi = start();
        let e0 = hartree_energy(&m, &phi, 0.0).unwrap();
        let e1 = hartree_energy(&m, &hartree_evolve(&m, &phi, 0.0, 3.0, 1e-3).unwrap(), 3.0).unwrap();
        assert!((e0 - e1).abs() < 1e-10);
    }
}
