//! Grids, two-component fields, the matrix potential and pointwise 2×2 algebra.

pub mod field;
pub mod grid;
pub mod mat2;
pub mod potential;

pub use field::{spinor_norm2, SpinorField};
pub use grid::Grid;
pub use mat2::{matexp_2x2, Mat2};
pub use potential::{assemble_S, FieldForm, MatrixPotential, RabiParams, SpatialForm};
