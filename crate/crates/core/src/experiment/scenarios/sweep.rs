use rayon::prelude::*;

use crate::counting::suites::Check;
use crate::error::Result;
use crate::experiment::config::ScatteringSweepScenario;
use crate::experiment::output::{Findings, Sink, Table};
use crate::experiment::svg::{Plot, Series};
use crate::fit::loglog_slope;
use crate::scattering::{
    build_shell, rescale_potential, scattering_length, square_well_scattering_length, GNorms, RadialPotential,
    SolverSettings,
};

pub fn run(s: &ScatteringSweepScenario, sink: &mut Sink, found: &mut Findings) -> Result<()> {
    let settings = SolverSettings::default();

    let mut wells = Table::new(&["height", "radius", "a_numeric", "a_closed_form", "relative_error"]);
    let mut worst_well = 0.0f64;
    for &[h, r] in &s.wells {
        let a = scattering_length(&RadialPotential::square_well(h, r)?, &settings)?.scattering_length;
        let exact = square_well_scattering_length(h, r);
        let rel = ((a - exact) / exact).abs();
        worst_well = worst_well.max(rel);
        wells.row(&[h, r, a, exact, rel]);
    }
    sink.csv("wells.csv", &wells)?;
    if !s.wells.is_empty() {
        found.check(Check::at_most("square_well_relative_error", worst_well, 1e-8));
    }

    let base = RadialPotential::new(s.base.clone())?;
    let a = scattering_length(&base, &settings)?.scattering_length;
    found.metric("base_scattering_length", a);
    let mut scaling = Table::new(&["n", "a_n", "a_n_times_n_over_a"]);
    let mut worst_scaling = 0.0f64;
    for &n in &s.scaling_n {
        let a_n = scattering_length(&rescale_potential(&base, n)?, &settings)?.scattering_length;
        let ratio = a_n * n as f64 / a;
        worst_scaling = worst_scaling.max((ratio - 1.0).abs());
        scaling.row(&[n as f64, a_n, ratio]);
    }
    sink.csv("scaling.csv", &scaling)?;
    if !s.scaling_n.is_empty() {
        found.check(Check::at_most("scaling_law_deviation", worst_scaling, 1e-9));
    }

    let jobs: Vec<(f64, u64)> = s.betas.iter().flat_map(|&b| s.n_values.iter().map(move |&n| (b, n))).collect();
    let shells = jobs
        .par_iter()
        .map(|&(beta, n)| {
            let shell = build_shell(&base, beta, n, &settings)?;
            let norms = shell.g_norms()?;
            Ok((shell, norms))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&[
        "beta",
        "n",
        "a_n",
        "inner_radius",
        "outer_radius",
        "outer_radius_times_n_beta",
        "residual_scattering_length",
        "g_l1",
        "g_l32",
        "g_l2",
    ]);
    for ((beta, n), (shell, g)) in jobs.iter().zip(&shells) {
        let nf = *n as f64;
        table.row(&[
            *beta,
            nf,
            shell.a_n,
            shell.inner_radius,
            shell.outer_radius,
            shell.outer_radius * nf.powf(*beta),
            shell.residual_scattering_length,
            g.l1,
            g.l32,
            g.l2,
        ]);
    }
    sink.csv("shells.csv", &table)?;

    let mut slopes = Table::new(&["beta", "norm", "slope", "expected", "deviation"]);
    let mut plot = Plot::new("g norms", "N", "norm").log_log();
    let per = s.n_values.len();
    for (bi, &beta) in s.betas.iter().enumerate() {
        let rows = &shells[bi * per..(bi + 1) * per];
        let xs: Vec<f64> = s.n_values.iter().map(|&n| n as f64).collect();
        let residual = rows.iter().map(|(sh, _)| sh.residual_scattering_length.abs()).fold(0.0, f64::max);
        found.check(Check::at_most(format!("beta_{beta}_residual_scattering_length"), residual, 1e-10));
        let scaled: Vec<f64> = rows.iter().zip(&xs).map(|((sh, _), n)| sh.outer_radius * n.powf(beta)).collect();
        let band = scaled.iter().cloned().fold(0.0, f64::max) / scaled.iter().cloned().fold(f64::INFINITY, f64::min);
        found.check(Check::at_most(format!("beta_{beta}_outer_radius_band"), band, 3.0));
        let picks: [(&str, fn(&GNorms) -> f64, f64); 3] = [
            ("l1", |g| g.l1, -(1.0 + 2.0 * beta)),
            ("l32", |g| g.l32, -(1.0 + beta)),
            ("l2", |g| g.l2, -(1.0 + 0.5 * beta)),
        ];
        for (name, pick, expected) in picks {
            let ys: Vec<f64> = rows.iter().map(|(_, g)| pick(g)).collect();
            let slope = loglog_slope(&xs, &ys);
            slopes.text_row(&[
                beta.to_string(),
                name.to_string(),
                slope.to_string(),
                expected.to_string(),
                (slope - expected).to_string(),
            ]);
            found.check(Check::near(format!("beta_{beta}_{name}_slope"), slope, expected, 0.05));
            found.constant(format!("beta_{beta}_{name}_prefactor"), ys[0] / xs[0].powf(expected));
            plot = plot.with(Series::new(format!("{name} β={beta}"), xs.iter().cloned().zip(ys).collect()));
        }
    }
    sink.csv("slopes.csv", &slopes)?;
    sink.svg("g_norms.svg", &plot)?;
    if shells.iter().any(|(sh, _)| sh.multiple_roots) {
        found.label("warning", "more than one sign change seen in a root bracket");
    }
    Ok(())
}
