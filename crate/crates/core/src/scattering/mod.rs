//! Zero-energy two-body scattering in three dimensions.

pub mod ode;
mod profile;
mod shell;
mod solve;

pub use profile::{rescale_potential, RadialPotential, RadialProfile};
pub use shell::{build_shell, g_beta_norms, GNorms, ShellConstruction};
pub use solve::{scattering_length, square_well_scattering_length, ScatteringSolution, SolverSettings};
