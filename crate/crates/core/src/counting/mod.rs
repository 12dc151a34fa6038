//! Projection counting: the projectors `P_k` onto states with `k` particles
//! outside a condensate orbital, weighted sums `f̂ = Σ f(k) P_k`, and the
//! condensation indicators built from them.

mod energy;
mod frame;
mod indicators;
mod operator;
mod slots;
pub mod suites;
mod weight;

pub use energy::{energy_identity_check, site_time_derivative, EnergyIdentityCheck};
pub use frame::{CondensateProjector, Frame};
pub use indicators::{
    alpha_full, dressed_bound, dressed_norm, potential_norms, sample_g_on_ring, AlphaFull, RingSampling,
};
pub use operator::{
    alpha_less, alpha_tilde, apply_counting, apply_pk, counting_expectation, delta_a, n_squared_expectation,
    site_blocks_to_modes, CountingOperator,
};
pub use slots::{apply_r12, Level, SlotFrame, SlotSpace, DEFAULT_SLOT_CAP};
pub use weight::{build_m_variants, MDifference, WeightFunction, WeightKind, DEFAULT_XI};
