use crate::counting::suites::Check;
use crate::error::Result;
use crate::experiment::config::GpRunScenario;
use crate::experiment::output::{Findings, Sink};
use crate::experiment::svg::{Plot, Series};
use crate::gp::{evolve, evolve_final, GPParams};
use crate::io::{write_trajectory_csv, Snapshot};
use crate::spinor::SpinorField;

use super::initial_field;

pub fn field_distance(a: &SpinorField, b: &SpinorField) -> f64 {
    let s: f64 = a.u.iter().zip(&b.u).chain(a.v.iter().zip(&b.v)).map(|(x, y)| (x - y).norm_sqr()).sum();
    (s * a.grid.cell_volume()).sqrt()
}

pub fn run(s: &GpRunScenario, sink: &mut Sink, found: &mut Findings) -> Result<()> {
    let grid = s.grid.build()?;
    let f0 = initial_field(&grid, &s.initial)?;
    let params =
        GPParams { scattering_length: s.scattering_length, potential: s.potential.clone(), dt: s.dt, t_end: s.t_end };
    let steps = params.validate(&grid)?;
    let traj = evolve(&f0, &params, s.record_every)?;

    let mut csv = Vec::new();
    write_trajectory_csv(&mut csv, &traj)?;
    sink.bytes("trajectory.csv", &csv)?;
    if s.write_snapshot {
        if let Some(last) = traj.last() {
            let mut bytes = Vec::new();
            Snapshot::Field(last.clone()).write_to(&mut bytes)?;
            sink.bytes("final.bin", &bytes)?;
        }
    }
    let energy = Plot::new("GP energy", "t", "E")
        .with(Series::new("E", traj.times.iter().zip(&traj.energies).map(|(t, e)| (*t, *e)).collect()));
    sink.svg("energy.svg", &energy)?;
    let pops = Plot::new("populations", "t", "norm²")
        .with(Series::new("up", traj.times.iter().zip(&traj.populations).map(|(t, p)| (*t, p.0)).collect()))
        .with(Series::new("down", traj.times.iter().zip(&traj.populations).map(|(t, p)| (*t, p.1)).collect()));
    sink.svg("populations.svg", &pops)?;

    let norm_drift = traj.populations.iter().map(|(a, b)| (a + b - 1.0).abs()).fold(0.0, f64::max);
    let e0 = traj.energies[0];
    let energy_drift =
        traj.energies.iter().map(|e| (e - e0).abs() / e0.abs().max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
    found.metric("steps", steps as f64);
    found.metric("initial_energy", e0);
    found.metric("norm_drift", norm_drift);
    found.metric("relative_energy_drift", energy_drift);
    found.check(Check::at_most("norm_drift", norm_drift, 1e-9));
    if s.potential.is_static() {
        found.check(Check::at_most("relative_energy_drift", energy_drift, 1e-6));
    }

    if s.richardson {
        let coarse = traj.last().cloned().unwrap_or(f0.clone());
        let half = evolve_final(&f0, &GPParams { dt: s.dt / 2.0, ..params.clone() })?;
        let quarter = evolve_final(&f0, &GPParams { dt: s.dt / 4.0, ..params.clone() })?;
        let (e1, e2) = (field_distance(&coarse, &half), field_distance(&half, &quarter));
        found.metric("richardson_difference_dt", e1);
        found.metric("richardson_difference_half_dt", e2);
        found.metric("richardson_ratio", e1 / e2);
        found.check(Check::near("richardson_ratio", e1 / e2, 4.0, 0.4));
    }
    Ok(())
}
