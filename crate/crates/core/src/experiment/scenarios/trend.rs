use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::counting::suites::{random_orbital, Check};
use crate::counting::{alpha_tilde, energy_identity_check};
use crate::error::Result;
use crate::experiment::config::{ConvergenceTrendScenario, LatticeInitial};
use crate::experiment::output::{Findings, Sink, Table};
use crate::experiment::svg::{Plot, Series};
use crate::fit::loglog_slope;
use crate::gp::lattice::{hartree_energy, hartree_evolve};
use crate::manybody::{
    energy_per_particle, partial_trace, propagate, trace_distance, LatticeModel, LatticeOrbital, ManyBodyState,
    Propagator, ScalingMode, SymmetricBasis,
};

struct Sample {
    alpha_tilde: f64,
    distance: f64,
    lower: f64,
    upper: f64,
    energy: f64,
    hartree: f64,
}

fn initial_orbital(s: &ConvergenceTrendScenario, seed: u64) -> Result<LatticeOrbital> {
    match &s.initial {
        LatticeInitial::Random => Ok(random_orbital(2 * s.sites, &mut ChaCha8Rng::seed_from_u64(seed))),
        LatticeInitial::Amplitudes { values } => {
            LatticeOrbital::new(values.iter().map(|[re, im]| C64::new(*re, *im)).collect())?.normalized()
        }
    }
}

pub fn run(s: &ConvergenceTrendScenario, seed: u64, sink: &mut Sink, found: &mut Findings) -> Result<()> {
    let model = LatticeModel {
        sites: s.sites,
        spacing: s.spacing,
        hopping: s.hopping,
        potential: s.potential.clone(),
        pair_by_distance: s.pair_by_distance.clone(),
        scaling: s.scaling,
    };
    model.validate()?;
    let phi0 = initial_orbital(s, seed)?;
    let g: f64 = (0..s.sites).map(|j| model.pair(0, j)).sum();
    found.metric("effective_coupling_g", g);
    found.label(
        "effective_coupling",
        match s.scaling {
            ScalingMode::MeanField => format!(
                "Hartree mean field: pair term V(|i-j|) divided by N-1 in the many-body Hamiltonian, undivided in the effective equation; g = sum_j V(|0-j|) = {g}"
            ),
            ScalingMode::GrossPitaevskii => {
                format!("pair term V(|i-j|) used as given in both equations; g = sum_j V(|0-j|) = {g}")
            }
        },
    );

    let mut phis = Vec::with_capacity(s.sample_times.len());
    let mut phi = phi0.clone();
    let mut t = 0.0;
    for &ts in &s.sample_times {
        phi = hartree_evolve(&model, &phi, t, ts, s.hartree_dt)?.normalized()?;
        phis.push(phi.clone());
        t = ts;
    }

    let per_n: Vec<Vec<Sample>> = s
        .n_values
        .par_iter()
        .map(|&n| -> Result<Vec<Sample>> {
            let basis = Arc::new(SymmetricBasis::new(2 * s.sites, n)?);
            let mut psi = ManyBodyState::product(basis.clone(), &phi0)?;
            let mut prop = Propagator::new(&model, basis)?;
            let mut t = 0.0;
            let mut out = Vec::with_capacity(s.sample_times.len());
            for (&ts, phi) in s.sample_times.iter().zip(&phis) {
                psi = prop.advance(&psi, t, ts, s.dt)?;
                t = ts;
                let d = trace_distance(&partial_trace(&psi)?, phi)?;
                out.push(Sample {
                    alpha_tilde: alpha_tilde(&psi, phi)?,
                    distance: d.distance,
                    lower: d.lower,
                    upper: d.upper,
                    energy: energy_per_particle(&psi, &model, ts)?,
                    hartree: hartree_energy(&model, phi, ts)?,
                });
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut table = Table::new(&[
        "n",
        "t",
        "alpha_tilde",
        "trace_distance",
        "trace_lower",
        "trace_upper",
        "energy_per_particle",
        "hartree_energy",
    ]);
    for (n, rows) in s.n_values.iter().zip(&per_n) {
        for (t, r) in s.sample_times.iter().zip(rows) {
            table.row(&[*n as f64, *t, r.alpha_tilde, r.distance, r.lower, r.upper, r.energy, r.hartree]);
        }
    }
    sink.csv("trend.csv", &table)?;

    let xs: Vec<f64> = s.n_values.iter().map(|&n| n as f64).collect();
    let column = |k: usize, pick: fn(&Sample) -> f64| -> Vec<f64> { per_n.iter().map(|rows| pick(&rows[k])).collect() };
    let mut fit = Table::new(&["t", "alpha_tilde_slope", "trace_distance_slope"]);
    for (k, t) in s.sample_times.iter().enumerate() {
        let a = loglog_slope(&xs, &column(k, |r| r.alpha_tilde));
        let d = loglog_slope(&xs, &column(k, |r| r.distance));
        fit.row(&[*t, a, d]);
    }
    sink.csv("fit.csv", &fit)?;

    let last = s.sample_times.len() - 1;
    let alphas = column(last, |r| r.alpha_tilde);
    let dists = column(last, |r| r.distance);
    let slope = loglog_slope(&xs, &alphas);
    let rise = dists.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    found.constant("alpha_tilde_slope", slope);
    found.constant("trace_distance_slope", loglog_slope(&xs, &dists));
    found.metric("t_last", s.sample_times[last]);
    found.check(Check { name: "trace_distance_decreasing".into(), measured: rise, limit: 0.0, passed: rise < 0.0 });
    found.check(Check::at_most("alpha_tilde_slope", slope, s.max_slope));
    let plot = Plot::new(format!("t = {}", s.sample_times[last]), "N", "value")
        .log_log()
        .with(Series::new("alpha_tilde", xs.iter().cloned().zip(alphas).collect()))
        .with(Series::new("trace distance", xs.iter().cloned().zip(dists).collect()));
    sink.svg("trend.svg", &plot)?;

    if let Some(e) = &s.energy_identity {
        let basis = Arc::new(SymmetricBasis::new(2 * s.sites, e.n)?);
        let psi = propagate(&ManyBodyState::product(basis, &phi0)?, &model, 0.0, e.t, s.dt)?;
        let phi = hartree_evolve(&model, &phi0, 0.0, e.t, s.hartree_dt)?.normalized()?;
        let check = energy_identity_check(&model, &psi, &phi, e.t, &e.deltas, e.substeps)?;
        let mut t = Table::new(&["delta", "centered_difference", "delta_a", "error"]);
        for ((d, c), err) in check.deltas.iter().zip(&check.centered).zip(&check.errors) {
            t.row(&[*d, *c, check.delta_a, *err]);
        }
        sink.csv("energy_identity.csv", &t)?;
        found.metric("energy_identity_delta_a", check.delta_a);
        for (i, r) in check.ratios.iter().enumerate() {
            found.check(Check::near(format!("energy_identity_ratio_{i}"), *r, 4.0, 0.4));
        }
    }
    Ok(())
}
