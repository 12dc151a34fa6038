use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::energy::gp_energy_parts;
use super::spectral::Spectral;
use crate::error::{Error, Result};
use crate::spinor::mat2::matexp_hermitian_unchecked;
use crate::spinor::{Grid, Mat2, MatrixPotential, SpinorField};

const PI: f64 = std::f64::consts::PI;
const PARALLEL_THRESHOLD: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GPParams {
    pub scattering_length: f64,
    pub potential: MatrixPotential,
    pub dt: f64,
    pub t_end: f64,
}

impl GPParams {
    /// Number of steps needed to reach `t_end`; fails unless `t_end` is a
    /// whole number of steps.
    pub fn n_steps(&self) -> Result<usize> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= self.dt) {
            return Err(Error::Config(format!("horizon t_end = {} is shorter than dt = {}", self.t_end, self.dt)));
        }
        let n = (self.t_end / self.dt).round();
        if (n * self.dt - self.t_end).abs() > 1e-9 * self.t_end.max(1.0) {
            return Err(Error::Config(format!(
                "horizon t_end = {} is not a whole number of steps of dt = {}",
                self.t_end, self.dt
            )));
        }
        Ok(n as usize)
    }

    /// Checks the step count and the stability guard `dt · max‖S‖ ≤ 1/2`,
    /// sampling the potential at the half-step times of the run.
    pub fn validate(&self, grid: &Grid) -> Result<usize> {
        let n = self.n_steps()?;
        if !self.scattering_length.is_finite() {
            return Err(Error::Config("scattering length must be finite".into()));
        }
        let times: Vec<f64> = if self.potential.is_static() {
            vec![0.0]
        } else {
            let samples = n.min(64);
            (0..samples).map(|j| (j as f64 + 0.5) * self.t_end / samples as f64).collect()
        };
        let smax = self.potential.max_norm_on_grid(grid, &times)?;
        if self.dt * smax > 0.5 {
            return Err(Error::Config(format!("dt · max‖S‖ = {:.3} exceeds 0.5; reduce dt", self.dt * smax)));
        }
        Ok(n)
    }
}

/// Strang splitting for the two-component GP equation. Owns the FFT plans,
/// kinetic phases and (for static potentials) the cached half-step
/// propagators.
pub struct StrangStepper {
    grid: Grid,
    a: f64,
    dt: f64,
    potential: MatrixPotential,
    spectral: Spectral,
    kinetic_phase: Vec<C64>,
    positions: Vec<[f64; 3]>,
    static_half: Option<Vec<Mat2>>,
}

impl StrangStepper {
    pub fn new(grid: &Grid, params: &GPParams) -> Result<Self> {
        let spectral = Spectral::new(grid);
        let kinetic_phase = spectral.k_squared().iter().map(|k2| C64::from_polar(1.0, -k2 * params.dt)).collect();
        let positions: Vec<[f64; 3]> = (0..grid.len()).map(|i| grid.position(i)).collect();
        let dim = grid.dim();
        let static_half = if params.potential.is_static() {
            let mut cache = Vec::with_capacity(positions.len());
            for x in &positions {
                let s = params.potential.assemble(&x[..dim], 0.0)?;
                cache.push(matexp_hermitian_unchecked(&s, 0.5 * params.dt));
            }
            Some(cache)
        } else {
            None
        };
        Ok(Self {
            grid: grid.clone(),
            a: params.scattering_length,
            dt: params.dt,
            potential: params.potential.clone(),
            spectral,
            kinetic_phase,
            positions,
            static_half,
        })
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    /// Advances `f` from `t` to `t + dt`.
    pub fn step(&self, f: &mut SpinorField, t: f64) -> Result<()> {
        if f.grid != self.grid {
            return Err(Error::Structural("field grid differs from stepper grid".into()));
        }
        let t_mid = t + 0.5 * self.dt;
        self.potential_half_step(f, t_mid)?;
        self.kinetic_step(&mut f.u);
        self.kinetic_step(&mut f.v);
        self.potential_half_step(f, t_mid)
    }

    fn kinetic_step(&self, psi: &mut [C64]) {
        self.spectral.forward(psi);
        psi.iter_mut().zip(&self.kinetic_phase).for_each(|(z, p)| *z *= p);
        self.spectral.inverse(psi);
    }

    // The pointwise flow is unitary, so |u|² + |v|² is constant along it and
    // the nonlinear term reduces to a scalar phase.
    fn potential_half_step(&self, f: &mut SpinorField, t: f64) -> Result<()> {
        let h = 0.5 * self.dt;
        let g = 8.0 * PI * self.a;
        let dim = self.grid.dim();
        let update = |(i, (u, v)): (usize, (&mut C64, &mut C64))| -> Result<()> {
            let rho = u.norm_sqr() + v.norm_sqr();
            let phase = C64::from_polar(1.0, -g * rho * h);
            let prop = match &self.static_half {
                Some(cache) => cache[i],
                None => {
                    let s = self.potential.assemble(&self.positions[i][..dim], t)?;
                    matexp_hermitian_unchecked(&s, h)
                }
            };
            let (nu, nv) = prop.apply(*u, *v);
            *u = nu * phase;
            *v = nv * phase;
            Ok(())
        };
        if f.u.len() >= PARALLEL_THRESHOLD {
            f.u.par_iter_mut().zip(f.v.par_iter_mut()).enumerate().try_for_each(update)
        } else {
            f.u.iter_mut().zip(f.v.iter_mut()).enumerate().try_for_each(update)
        }
    }
}

/// One Strang step of size `params.dt` starting at time `t`.
pub fn strang_step(f: &SpinorField, params: &GPParams, t: f64) -> Result<SpinorField> {
    let stepper = StrangStepper::new(&f.grid, params)?;
    let mut out = f.clone();
    stepper.step(&mut out, t)?;
    if !out.all_finite() {
        return Err(Error::BlowUp { step: 1, time: t + params.dt });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GPTrajectory {
    pub times: Vec<f64>,
    pub energies: Vec<f64>,
    pub populations: Vec<(f64, f64)>,
    #[serde(skip)]
    pub snapshots: Vec<SpinorField>,
}

impl GPTrajectory {
    pub fn last(&self) -> Option<&SpinorField> {
        self.snapshots.last()
    }
}

/// Integrates from `t = 0` to `params.t_end`, recording time, energy,
/// populations and the field every `record_every` steps and at the end.
pub fn evolve(f0: &SpinorField, params: &GPParams, record_every: usize) -> Result<GPTrajectory> {
    if record_every == 0 {
        return Err(Error::Config("record_every must be at least 1".into()));
    }
    let n = params.validate(&f0.grid)?;
    if !f0.all_finite() {
        return Err(Error::BlowUp { step: 0, time: 0.0 });
    }
    let stepper = StrangStepper::new(&f0.grid, params)?;
    let mut traj = GPTrajectory { times: vec![], energies: vec![], populations: vec![], snapshots: vec![] };
    let mut f = f0.clone();
    record(&mut traj, &f, params, &stepper, 0.0)?;
    for step in 1..=n {
        let t = (step - 1) as f64 * params.dt;
        stepper.step(&mut f, t)?;
        if !f.all_finite() {
            return Err(Error::BlowUp { step, time: step as f64 * params.dt });
        }
        if step % record_every == 0 || step == n {
            record(&mut traj, &f, params, &stepper, step as f64 * params.dt)?;
        }
    }
    Ok(traj)
}

/// Final field only, without energy bookkeeping.
pub fn evolve_final(f0: &SpinorField, params: &GPParams) -> Result<SpinorField> {
    let n = params.validate(&f0.grid)?;
    let stepper = StrangStepper::new(&f0.grid, params)?;
    let mut f = f0.clone();
    for step in 1..=n {
        stepper.step(&mut f, (step - 1) as f64 * params.dt)?;
        if !f.all_finite() {
            return Err(Error::BlowUp { step, time: step as f64 * params.dt });
        }
    }
    Ok(f)
}

fn record(traj: &mut GPTrajectory, f: &SpinorField, params: &GPParams, stepper: &StrangStepper, t: f64) -> Result<()> {
    let e = gp_energy_parts(f, params.scattering_length, &params.potential, t, stepper.spectral())?;
    traj.times.push(t);
    traj.energies.push(e.total());
    traj.populations.push(f.populations());
    traj.snapshots.push(f.clone());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::{spinor_norm2, FieldForm, RabiParams, SpatialForm};
    use proptest::prelude::*;

    fn gaussian_field(grid: Grid, shift: f64, mix: f64) -> SpinorField {
        let mut f = SpinorField::from_fn(
            grid,
            |x| C64::new((-(x[0] - shift).powi(2)).exp(), 0.1 * x[0]),
            |x| C64::new(mix * (-(x[0] + shift).powi(2) / 2.0).exp(), 0.0),
        );
        f.normalize().unwrap();
        f
    }

    fn trapped(a: f64, dt: f64, t_end: f64) -> GPParams {
        GPParams {
            scattering_length: a,
            potential: MatrixPotential::rabi_drive(RabiParams::resonant(0.5, 1.0)).with_traps(
                SpatialForm::Harmonic { strength: 0.25, center: vec![] },
                SpatialForm::Harmonic { strength: 0.25, center: vec![0.5] },
            ),
            dt,
            t_end,
        }
    }

    #[test]
    fn zero_potential_plane_wave_phase() {
        let g = Grid::cubic(1, 16, 4.0).unwrap();
        let k = std::f64::consts::TAU / 4.0 * 2.0;
        let c = g.volume().sqrt().recip();
        let f = SpinorField::from_fn(g, |x| C64::from_polar(c, k * x[0]), |_| C64::new(0.0, 0.0));
        let p = GPParams { scattering_length: 0.0, potential: MatrixPotential::zero(), dt: 0.01, t_end: 0.01 };
        let out = strang_step(&f, &p, 0.0).unwrap();
        for (a, b) in out.u.iter().zip(&f.u) {
            assert!((a - b * C64::from_polar(1.0, -k * k * 0.01)).norm() < 1e-13);
        }
    }

    #[test]
    fn norm_preserved_per_step() {
        let f = gaussian_field(Grid::cubic(1, 128, 16.0).unwrap(), 1.0, 0.7);
        let p = trapped(0.2, 0.01, 0.01);
        let out = strang_step(&f, &p, 0.3).unwrap();
        assert!((spinor_norm2(&out).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn horizon_must_be_whole_steps() {
        let g = Grid::cubic(1, 8, 1.0).unwrap();
        let p = GPParams { scattering_length: 0.0, potential: MatrixPotential::zero(), dt: 0.3, t_end: 1.0 };
        assert!(matches!(p.validate(&g), Err(Error::Config(_))));
        let p = GPParams { t_end: 0.1, ..p };
        assert!(matches!(p.validate(&g), Err(Error::Config(_))));
    }

    #[test]
    fn stability_guard() {
        let g = Grid::cubic(1, 64, 40.0).unwrap();
        let p = GPParams {
            scattering_length: 0.0,
            potential: MatrixPotential::zero()
                .with_traps(SpatialForm::Harmonic { strength: 1.0, center: vec![] }, SpatialForm::Zero),
            dt: 0.01,
            t_end: 0.1,
        };
        assert!(matches!(p.validate(&g), Err(Error::Config(_))));
    }

    #[test]
    fn blow_up_is_reported() {
        let g = Grid::cubic(1, 8, 1.0).unwrap();
        let mut f = SpinorField::zeros(g);
        f.u[0] = C64::new(1.0, 0.0);
        f.u[3] = C64::new(f64::NAN, 0.0);
        let p = GPParams { scattering_length: 0.0, potential: MatrixPotential::zero(), dt: 0.01, t_end: 0.02 };
        assert!(matches!(evolve_final(&f, &p), Err(Error::BlowUp { .. })));
    }

    #[test]
    fn spin_swap_equivariance() {
        let f = gaussian_field(Grid::cubic(1, 64, 12.0).unwrap(), 0.8, 0.4);
        let mut p = trapped(0.3, 0.01, 0.2);
        p.potential.b1 = FieldForm::Cos { amplitude: 0.4, frequency: 1.3, phase: 0.2 };
        let direct = evolve_final(&f, &p).unwrap();
        let swap = |g: &SpinorField| SpinorField::new(g.grid.clone(), g.v.clone(), g.u.clone()).unwrap();
        let p_sw = GPParams { potential: p.potential.spin_swapped(), ..p.clone() };
        let via_swap = evolve_final(&swap(&f), &p_sw).unwrap();
        let back = swap(&via_swap);
        let err = direct
            .u
            .iter()
            .zip(&back.u)
            .chain(direct.v.iter().zip(&back.v))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn trajectory_records_at_requested_stride() {
        let f = gaussian_field(Grid::cubic(1, 32, 10.0).unwrap(), 0.5, 0.5);
        let traj = evolve(&f, &trapped(0.1, 0.01, 0.25), 10).unwrap();
        assert_eq!(traj.times.len(), 4);
        assert!((traj.times[3] - 0.25).abs() < 1e-14);
        for s in &traj.snapshots {
            assert!((spinor_norm2(s).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn two_dimensional_step_keeps_norm() {
        // 64² points takes the rayon path
        let g = Grid::cubic(2, 64, 10.0).unwrap();
        let mut f = SpinorField::from_fn(
            g,
            |x| C64::new((-(x[0] * x[0] + x[1] * x[1])).exp(), 0.0),
            |x| C64::new(0.0, 0.3 * (-(x[0] * x[0] + 2.0 * x[1] * x[1])).exp()),
        );
        f.normalize().unwrap();
        let out = strang_step(&f, &trapped(0.2, 0.005, 0.005), 0.0).unwrap();
        assert!((spinor_norm2(&out).unwrap() - 1.0).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn norm_drift_is_tiny(shift in -1.5f64..1.5, mix in 0.0f64..2.0, a in 0.0f64..0.5) {
            let f = gaussian_field(Grid::cubic(1, 64, 14.0).unwrap(), shift, mix);
            let out = evolve_final(&f, &trapped(a, 0.01, 0.5)).unwrap();
            prop_assert!((spinor_norm2(&out).unwrap() - 1.0).abs() < 1e-11);
        }
    }
}
