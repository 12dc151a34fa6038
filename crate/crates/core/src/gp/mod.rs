//! Split-step integration of the two-component Gross–Pitaevskii equation
//! and the lattice effective (Hartree) equation.

mod energy;
pub mod lattice;
mod rabi;
pub mod spectral;
mod stepper;

pub use energy::{gp_energy, GpEnergyParts};
pub use rabi::rabi_reference;
pub use stepper::{evolve, evolve_final, strang_step, GPParams, GPTrajectory, StrangStepper};
