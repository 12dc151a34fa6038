use num_complex::Complex64 as C64;

use crate::counting::suites::Check;
use crate::error::Result;
use crate::experiment::config::RabiScenario;
use crate::experiment::output::{Findings, Sink, Table};
use crate::experiment::svg::{Plot, Series};
use crate::gp::{rabi_reference, GPParams, StrangStepper};
use crate::spinor::{Grid, MatrixPotential, RabiParams, SpinorField};

pub fn run(s: &RabiScenario, sink: &mut Sink, found: &mut Findings) -> Result<()> {
    let grid = Grid::cubic(1, s.points, s.length)?;
    let rabi = RabiParams::resonant(s.omega_rabi, s.omega_drive);
    let params = GPParams {
        scattering_length: 0.0,
        potential: MatrixPotential::rabi_drive(rabi),
        dt: s.t_end / s.steps as f64,
        t_end: s.t_end,
    };
    params.validate(&grid)?;
    let amp = C64::new(1.0 / grid.volume().sqrt(), 0.0);
    let u0 = vec![amp; grid.len()];
    let mut f = SpinorField::new(grid.clone(), u0.clone(), vec![C64::new(0.0, 0.0); grid.len()])?;
    let stepper = StrangStepper::new(&grid, &params)?;

    let law = |t: f64| ((s.omega_rabi * t).cos().powi(2), (s.omega_rabi * t).sin().powi(2));
    let deviation = |f: &SpinorField, t: f64| {
        let ((pu, pd), (cu, cd)) = (f.populations(), law(t));
        (pu - cu).abs().max((pd - cd).abs())
    };
    let mut rows: Vec<[f64; 6]> = Vec::new();
    let mut max_dev = 0.0f64;
    let mut max_field = 0.0f64;
    for step in 0..=s.steps {
        let t = step as f64 * params.dt;
        if step > 0 {
            stepper.step(&mut f, t - params.dt)?;
        }
        let dev = deviation(&f, t);
        max_dev = max_dev.max(dev);
        if step % s.record_every == 0 || step == s.steps {
            let ((pu, pd), (cu, cd)) = (f.populations(), law(t));
            rows.push([t, pu, pd, cu, cd, dev]);
            let r = rabi_reference(&grid, &u0, &rabi, t)?;
            let err = f.u.iter().zip(&r.u).chain(f.v.iter().zip(&r.v)).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            max_field = max_field.max(err / amp.re);
        }
    }
    let mut table = Table::new(&["t", "pop_up", "pop_down", "ref_up", "ref_down", "deviation"]);
    rows.iter().for_each(|r| table.row(r));
    sink.csv("rabi.csv", &table)?;
    let mut plot = Plot::new("Rabi populations", "t", "population");
    for (label, col) in [("up", 1), ("down", 2), ("cos²", 3), ("sin²", 4)] {
        plot = plot.with(Series::new(label, rows.iter().map(|r| (r[0], r[col])).collect()));
    }
    sink.svg("rabi.svg", &plot)?;

    found.metric("max_deviation", max_dev);
    found.metric("max_field_error", max_field);
    found.metric("dt", params.dt);
    found.metric("steps", s.steps as f64);
    found.check(Check::at_most("population_law_deviation", max_dev, s.tolerance));
    Ok(())
}
