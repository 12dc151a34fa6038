//! Exact dynamics of `N` spin-½ bosons on a small periodic ring.

mod basis;
mod density;
mod hamiltonian;
pub mod krylov;
mod model;
mod state;

pub use basis::{symmetric_dimension, SymmetricBasis, DEFAULT_BASIS_CAP};
pub use density::{partial_trace, trace_distance, OneBodyDensityMatrix, TraceDistance};
pub use hamiltonian::{assemble_hamiltonian, Hamiltonian};
pub use model::{LatticeModel, LatticeOrbital, ScalingMode};
pub use state::{energy_per_particle, propagate, ManyBodyState, Propagator};

pub(crate) use state::factorials;
