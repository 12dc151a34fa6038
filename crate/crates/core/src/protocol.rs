//! State maps of the imaging sequence on three-level spinors
//! `(u, v, w)` over the levels `|↑⟩`, `|↓⟩` and the imaging level `|m⟩`.
//!
//! Up-level imaging is blow, pump, probe, image; down-level imaging is
//! probe, image.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::manybody::LatticeOrbital;
use crate::spinor::SpinorField;

#[derive(Clone, Debug, PartialEq)]
pub struct ThreeLevelSpinor {
    pub u: Vec<C64>,
    pub v: Vec<C64>,
    pub w: Vec<C64>,
    /// Quadrature weight per sample; 1 on a lattice.
    pub cell_volume: f64,
}

impl ThreeLevelSpinor {
    pub fn new(u: Vec<C64>, v: Vec<C64>, w: Vec<C64>, cell_volume: f64) -> Result<Self> {
        if u.len() != v.len() || u.len() != w.len() {
            return Err(Error::Structural(format!("level lengths {}, {}, {} differ", u.len(), v.len(), w.len())));
        }
        if !(cell_volume > 0.0 && cell_volume.is_finite()) {
            return Err(Error::Config(format!("cell volume must be positive, got {cell_volume}")));
        }
        Ok(Self { u, v, w, cell_volume })
    }

    /// `(u, v, 0)` from a grid spinor.
    pub fn from_field(f: &SpinorField) -> Self {
        let zero = vec![C64::new(0.0, 0.0); f.u.len()];
        Self { u: f.u.clone(), v: f.v.clone(), w: zero, cell_volume: f.grid.cell_volume() }
    }

    /// `(u, v, 0)` from a lattice spinor.
    pub fn from_orbital(phi: &LatticeOrbital) -> Self {
        let zero = vec![C64::new(0.0, 0.0); phi.sites()];
        Self { u: phi.up().to_vec(), v: phi.down().to_vec(), w: zero, cell_volume: 1.0 }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// Squared norms of the three levels.
    pub fn populations(&self) -> [f64; 3] {
        let p = |x: &[C64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.cell_volume;
        [p(&self.u), p(&self.v), p(&self.w)]
    }

    pub fn norm2(&self) -> f64 {
        self.populations().iter().sum()
    }

    fn zeros(&self) -> Vec<C64> {
        vec![C64::new(0.0, 0.0); self.len()]
    }
}

/// Repump: `(u, v, w) ↦ (0, u + v, w)`.
pub fn pump(s: &ThreeLevelSpinor) -> ThreeLevelSpinor {
    let v = s.u.iter().zip(&s.v).map(|(a, b)| a + b).collect();
    ThreeLevelSpinor { u: s.zeros(), v, w: s.w.clone(), cell_volume: s.cell_volume }
}

/// Blow away the lower level: `(u, v, w) ↦ (u, 0, w)`.
pub fn blow(s: &ThreeLevelSpinor) -> ThreeLevelSpinor {
    ThreeLevelSpinor { u: s.u.clone(), v: s.zeros(), w: s.w.clone(), cell_volume: s.cell_volume }
}

/// Probe transfer: `(u, v, w) ↦ (u, 0, w + v)`.
pub fn probe(s: &ThreeLevelSpinor) -> ThreeLevelSpinor {
    let w = s.w.iter().zip(&s.v).map(|(a, b)| a + b).collect();
    ThreeLevelSpinor { u: s.u.clone(), v: s.zeros(), w, cell_volume: s.cell_volume }
}

/// Spatial density recorded by the camera.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityProfile {
    pub values: Vec<f64>,
    pub cell_volume: f64,
}

impl DensityProfile {
    pub fn total(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_volume
    }
}

/// Project onto `|m⟩` and return `|w(x)|²`.
pub fn select_and_image(s: &ThreeLevelSpinor) -> DensityProfile {
    DensityProfile { values: s.w.iter().map(|z| z.norm_sqr()).collect(), cell_volume: s.cell_volume }
}

/// Blow, pump, probe, image: the up-level density.
pub fn image_up(s: &ThreeLevelSpinor) -> DensityProfile {
    select_and_image(&probe(&pump(&blow(s))))
}

/// Probe, image: the down-level density.
pub fn image_down(s: &ThreeLevelSpinor) -> DensityProfile {
    select_and_image(&probe(s))
}

/// Pump, probe, image: both levels together.
pub fn image_joint(s: &ThreeLevelSpinor) -> DensityProfile {
    select_and_image(&probe(&pump(s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn state(u: Vec<C64>, v: Vec<C64>) -> ThreeLevelSpinor {
        let n = u.len();
        ThreeLevelSpinor::new(u, v, vec![c(0.0, 0.0); n], 0.5).unwrap()
    }

    #[test]
    fn pump_moves_up_into_down() {
        let s = state(vec![c(1.0, 0.5), c(0.0, -1.0)], vec![c(0.0, 0.0); 2]);
        let p = pump(&s);
        assert_eq!(p.v, s.u);
        assert!(p.u.iter().all(|z| z.norm() == 0.0));
        let s = state(vec![c(0.0, 0.0); 2], vec![c(0.3, 0.0), c(0.0, 0.2)]);
        assert_eq!(pump(&s), s);
    }

    #[test]
    fn chains_image_each_level() {
        let u = vec![c(0.6, 0.0), c(0.0, 0.3), c(0.1, 0.1)];
        let v = vec![c(0.0, 0.2), c(0.5, 0.0), c(-0.2, 0.4)];
        let s = state(u.clone(), v.clone());
        let up = image_up(&s);
        let down = image_down(&s);
        for i in 0..3 {
            assert!((up.values[i] - u[i].norm_sqr()).abs() < 1e-15);
            assert!((down.values[i] - v[i].norm_sqr()).abs() < 1e-15);
        }
    }

    #[test]
    fn joint_chain_adds_disjoint_levels() {
        let (a, b) = (0.8f64.sqrt(), 0.2f64.sqrt());
        let z = c(0.0, 0.0);
        let s = ThreeLevelSpinor::new(vec![c(a, 0.0), z, z], vec![z, z, c(0.0, b)], vec![z; 3], 1.0).unwrap();
        let joint = image_joint(&s);
        assert!((joint.values[0] - 0.8).abs() < 1e-15 && (joint.values[2] - 0.2).abs() < 1e-15);
        assert!((joint.total() - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn up_chain_sends_u_to_imaging_level(
            raw in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), 1..16)
        ) {
            let u: Vec<C64> = raw.iter().map(|r| c(r.0, r.1)).collect();
            let v: Vec<C64> = raw.iter().map(|r| c(r.2, r.3)).collect();
            let s = state(u.clone(), v);
            let out = probe(&pump(&blow(&s)));
            prop_assert!(out.u.iter().chain(&out.v).all(|z| z.norm() == 0.0));
            prop_assert!(out.w.iter().zip(&u).all(|(a, b)| (a - b).norm() <= 1e-14));
            let image = select_and_image(&out);
            prop_assert!((image.total() - out.populations()[2]).abs() <= 1e-12);
            prop_assert!(blow(&s).norm2() <= s.norm2() + 1e-15);
        }

        #[test]
        fn orthogonal_pump_keeps_norm(
            raw in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..12)
        ) {
            // v = b·u on the first half and −a·u on the second, so ⟨u, v⟩ = ab − ba = 0
            let u: Vec<C64> = raw.iter().map(|r| c(r.0, r.1)).collect();
            let mut v = u.clone();
            let half = v.len() / 2;
            let (a, b): (f64, f64) = (u[..half].iter().map(|z| z.norm_sqr()).sum(), u[half..].iter().map(|z| z.norm_sqr()).sum());
            prop_assume!(a > 1e-6 && b > 1e-6);
            v[..half].iter_mut().for_each(|z| *z *= b);
            v[half..].iter_mut().for_each(|z| *z *= -a);
            let s = state(u, v);
            prop_assert!((pump(&s).norm2() - s.norm2()).abs() <= 1e-12 * s.norm2().max(1.0));
        }
    }
}
