use num_complex::Complex64 as C64;
use proptest::prelude::*;
use spinor_gp_core::gp::{evolve, evolve_final, GPParams};
use spinor_gp_core::spinor::{FieldForm, Grid, MatrixPotential, SpatialForm, SpinorField};

fn packet(grid: &Grid, shift: f64, mix: f64) -> SpinorField {
    let mut f = SpinorField::from_fn(
        grid.clone(),
        |x| C64::from_polar((-(x[0] - shift).powi(2)).exp(), 0.4 * x[0]),
        |x| C64::new(mix * (-(x[0] + shift).powi(2) / 2.0).exp(), 0.0),
    );
    f.normalize().unwrap();
    f
}

fn driven() -> MatrixPotential {
    MatrixPotential {
        b1: FieldForm::Modulated {
            profile: SpatialForm::Cosine { amplitude: 0.8, period: 8.0, phase: 0.3 },
            depth: 0.5,
            frequency: 1.7,
        },
        b2: FieldForm::Sin { amplitude: 0.4, frequency: 0.9, phase: 0.0 },
        v_hf: FieldForm::constant(0.6),
        ..MatrixPotential::zero()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn constant_trap_offset_is_a_global_phase(c in -3.0f64..3.0, a in 0.0f64..0.3, shift in -1.0f64..1.0) {
        let grid = Grid::cubic(1, 64, 16.0).unwrap();
        let f0 = packet(&grid, shift, 0.7);
        let base = driven();
        let lifted = base.clone().with_traps(SpatialForm::Constant { value: c }, SpatialForm::Constant { value: c });
        let (dt, t_end) = (0.01, 0.5);
        let plain = evolve_final(&f0, &GPParams { scattering_length: a, potential: base, dt, t_end }).unwrap();
        let moved = evolve_final(&f0, &GPParams { scattering_length: a, potential: lifted, dt, t_end }).unwrap();
        let phase = C64::from_polar(1.0, -c * t_end);
        let err = plain.u.iter().zip(&moved.u).chain(plain.v.iter().zip(&moved.v))
            .map(|(p, m)| (p * phase - m).norm())
            .fold(0.0, f64::max);
        prop_assert!(err < 1e-11, "phase mismatch {err}");
        let dens = plain.density().iter().zip(moved.density()).map(|(p, m)| (p - m).abs()).fold(0.0, f64::max);
        prop_assert!(dens < 1e-12, "density mismatch {dens}");
    }

    #[test]
    fn spin_diagonal_potential_conserves_each_population(a in 0.0f64..0.5, split in -2.0f64..2.0, mix in 0.1f64..2.0) {
        let grid = Grid::cubic(1, 64, 16.0).unwrap();
        let f0 = packet(&grid, 0.8, mix);
        let potential = MatrixPotential {
            v_hf: FieldForm::Cos { amplitude: split, frequency: 2.0, phase: 0.0 },
            ..MatrixPotential::zero()
        }
        .with_traps(
            SpatialForm::Harmonic { strength: 0.3, center: vec![] },
            SpatialForm::Cosine { amplitude: 1.0, period: 4.0, phase: 0.0 },
        );
        let traj = evolve(&f0, &GPParams { scattering_length: a, potential, dt: 0.005, t_end: 1.0 }, 20).unwrap();
        let (u0, v0) = traj.populations[0];
        for (u, v) in &traj.populations {
            prop_assert!((u - u0).abs() < 1e-10 && (v - v0).abs() < 1e-10);
        }
    }
}
