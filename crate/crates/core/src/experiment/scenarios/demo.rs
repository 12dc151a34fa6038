use std::f64::consts::PI;

use crate::counting::suites::Check;
use crate::error::Result;
use crate::experiment::config::ProtocolDemoScenario;
use crate::experiment::output::{Findings, Sink, Table};
use crate::experiment::svg::{Plot, Series};
use crate::gp::{evolve_final, GPParams};
use crate::protocol::{image_down, image_joint, image_up, ThreeLevelSpinor};
use crate::spinor::{MatrixPotential, RabiParams, SpatialForm};

use super::initial_field;

pub fn run(s: &ProtocolDemoScenario, sink: &mut Sink, found: &mut Findings) -> Result<()> {
    let grid = s.grid.build()?;
    let f0 = initial_field(&grid, &s.initial)?;
    let pulse = s.pulse_solver();
    let steps = (pulse / s.max_dt).ceil().max(1.0);
    let trap = SpatialForm::Harmonic { strength: s.trap_strength, center: vec![] };
    let params = GPParams {
        scattering_length: s.scattering_length,
        potential: MatrixPotential::rabi_drive(RabiParams::resonant(1.0, s.drive_solver))
            .with_traps(trap.clone(), trap),
        dt: pulse / steps,
        t_end: pulse,
    };
    let f = evolve_final(&f0, &params)?;
    let state = ThreeLevelSpinor::from_field(&f);
    let (up, down, joint) = (image_up(&state), image_down(&state), image_joint(&state));

    let mut table = Table::new(&["x", "density_up", "density_down", "image_up", "image_down", "image_joint"]);
    let mut plot_rows = Vec::new();
    for i in 0..grid.len() {
        let x = grid.position(i)[0];
        let row = [x, f.u[i].norm_sqr(), f.v[i].norm_sqr(), up.values[i], down.values[i], joint.values[i]];
        if grid.dim() == 1 {
            plot_rows.push(row);
        }
        table.row(&row);
    }
    sink.csv("protocol.csv", &table)?;
    if !plot_rows.is_empty() {
        let mut plot = Plot::new("images after the pulse", "x", "density");
        for (label, col) in [("up", 3), ("down", 4), ("joint", 5)] {
            plot = plot.with(Series::new(label, plot_rows.iter().map(|r| (r[0], r[col])).collect()));
        }
        sink.svg("protocol.svg", &plot)?;
    }

    let (pu, pd) = f.populations();
    found.metric("pulse_solver_time", pulse);
    found.metric("steps", steps);
    found.metric("pop_up", pu);
    found.metric("pop_down", pd);
    found.metric("uniform_drive_pop_up", pulse.cos().powi(2));
    found.metric("image_up_total", up.total());
    found.metric("image_down_total", down.total());
    found.metric("image_joint_total", joint.total());
    found.metric("time_unit_seconds", s.time_unit_seconds());
    found.metric("drive_over_rabi_physical", s.drive_hz / s.rabi_hz);
    found.metric("drive_over_rabi_solver", s.drive_solver);
    found.label(
        "rescaling",
        format!(
            "time unit 1/(2π·{} Hz) = {:e} s, so Ω = 1; the {} μs pulse is t = {pulse} (Ωt = {:.4}·π/2); \
             the {:e} Hz drive is replaced by ω = {} in solver units with V_hf = ω/2, which keeps the drive resonant",
            s.rabi_hz,
            s.time_unit_seconds(),
            s.pulse_us,
            pulse / (0.5 * PI),
            s.drive_hz,
            s.drive_solver
        ),
    );
    found.check(Check::at_most("image_up_mass_error", (up.total() - pu).abs(), 1e-12));
    found.check(Check::at_most("image_down_mass_error", (down.total() - pd).abs(), 1e-12));
    Ok(())
}
