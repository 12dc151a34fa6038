//! Two-component Gross–Pitaevskii dynamics, exact lattice many-body
//! dynamics, zero-energy scattering and projection-counting diagnostics.

// `!(x > 0.0)` rejects NaN as well as non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

pub mod counting;
pub mod error;
pub mod experiment;
pub mod fit;
pub mod gp;
pub mod io;
pub mod manybody;
pub mod protocol;
pub mod scattering;
pub mod spinor;

pub use counting::suites::{run_suite, Suite, SuiteOptions, SuiteReport};
pub use counting::{
    alpha_full, alpha_less, alpha_tilde, apply_counting, apply_pk, delta_a, energy_identity_check, CondensateProjector,
    CountingOperator, WeightFunction,
};
pub use error::{Error, Result};
pub use experiment::{run_experiment, ExperimentConfig, RunReport, Scenario};
pub use gp::{evolve, gp_energy, rabi_reference, strang_step, GPParams, GPTrajectory};
pub use manybody::{
    assemble_hamiltonian, energy_per_particle, partial_trace, propagate, trace_distance, LatticeModel, LatticeOrbital,
    ManyBodyState, OneBodyDensityMatrix, ScalingMode, SymmetricBasis,
};
pub use num_complex;
pub use protocol::{blow, probe, pump, select_and_image, DensityProfile, ThreeLevelSpinor};
pub use spinor::{
    assemble_S, matexp_2x2, spinor_norm2, FieldForm, Grid, Mat2, MatrixPotential, RabiParams, SpatialForm, SpinorField,
};
