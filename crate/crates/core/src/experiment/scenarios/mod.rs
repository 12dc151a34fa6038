mod demo;
mod gp_run;
mod rabi;
mod suite;
mod sweep;
mod trend;

use num_complex::Complex64 as C64;

use super::config::{ExperimentConfig, InitialState, Scenario};
use super::output::{Findings, Sink};
use crate::error::Result;
use crate::spinor::{Grid, SpinorField};

pub(crate) fn initial_field(grid: &Grid, init: &InitialState) -> Result<SpinorField> {
    let (shape, p): (Box<dyn Fn(&[f64]) -> f64>, f64) = match init {
        InitialState::Uniform { up_fraction } => (Box::new(|_| 1.0), *up_fraction),
        InitialState::Gaussian { width, center, up_fraction } => {
            let (w, c) = (*width, center.clone());
            let shape = move |x: &[f64]| {
                let r2: f64 = x.iter().enumerate().map(|(i, xi)| (xi - c.get(i).copied().unwrap_or(0.0)).powi(2)).sum();
                (-r2 / (2.0 * w * w)).exp()
            };
            (Box::new(shape), *up_fraction)
        }
    };
    let (a, b) = (p.sqrt(), (1.0 - p).sqrt());
    let mut f = SpinorField::from_fn(grid.clone(), |x| C64::new(a * shape(x), 0.0), |x| C64::new(b * shape(x), 0.0));
    f.normalize()?;
    Ok(f)
}

pub(crate) fn dispatch(cfg: &ExperimentConfig, sink: &mut Sink, found: &mut Findings) -> Result<()> {
    match &cfg.scenario {
        Scenario::Rabi(s) => rabi::run(s, sink, found),
        Scenario::GpRun(s) => gp_run::run(s, sink, found),
        Scenario::ScatteringSweep(s) => sweep::run(s, sink, found),
        Scenario::ConvergenceTrend(s) => trend::run(s, cfg.seed, sink, found),
        Scenario::LemmaSuite(s) => suite::run(s, cfg.seed, sink, found),
        Scenario::ProtocolDemo(s) => demo::run(s, sink, found),
    }
}
