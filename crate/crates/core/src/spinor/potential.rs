//! The spin-space matrix potential `S(x, t)`: traps, hyperfine splitting and
//! the Rabi field.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::grid::Grid;
use super::mat2::Mat2;
use crate::error::{Error, Result};

/// Time-independent analytic profile of position.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum SpatialForm {
    Zero,
    Constant {
        value: f64,
    },
    /// `strength · |x − center|²`; `center` padded with zeros.
    Harmonic {
        strength: f64,
        #[serde(default)]
        center: Vec<f64>,
    },
    /// `amplitude · cos(2π·x₀ / period + phase)` along the first axis.
    Cosine {
        amplitude: f64,
        period: f64,
        #[serde(default)]
        phase: f64,
    },
}

impl SpatialForm {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            SpatialForm::Zero => 0.0,
            SpatialForm::Constant { value } => *value,
            SpatialForm::Harmonic { strength, center } => {
                let r2: f64 =
                    x.iter().enumerate().map(|(i, xi)| (xi - center.get(i).copied().unwrap_or(0.0)).powi(2)).sum();
                strength * r2
            }
            SpatialForm::Cosine { amplitude, period, phase } => {
                amplitude * (2.0 * std::f64::consts::PI * x[0] / period + phase).cos()
            }
        }
    }
}

/// Analytic profile of position and time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum FieldForm {
    /// Time-independent spatial profile.
    Static { profile: SpatialForm },
    /// Spatially uniform `amplitude · cos(frequency·t + phase)`.
    Cos {
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Spatially uniform `amplitude · sin(frequency·t + phase)`.
    Sin {
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `profile(x) · (1 + depth · sin(frequency·t))`.
    Modulated { profile: SpatialForm, depth: f64, frequency: f64 },
}

impl FieldForm {
    pub fn zero() -> Self {
        FieldForm::Static { profile: SpatialForm::Zero }
    }

    pub fn constant(value: f64) -> Self {
        FieldForm::Static { profile: SpatialForm::Constant { value } }
    }

    pub fn eval(&self, x: &[f64], t: f64) -> f64 {
        match self {
            FieldForm::Static { profile } => profile.eval(x),
            FieldForm::Cos { amplitude, frequency, phase } => amplitude * (frequency * t + phase).cos(),
            FieldForm::Sin { amplitude, frequency, phase } => amplitude * (frequency * t + phase).sin(),
            FieldForm::Modulated { profile, depth, frequency } => {
                profile.eval(x) * (1.0 + depth * (frequency * t).sin())
            }
        }
    }

    /// Exact partial time derivative.
    pub fn time_derivative(&self, x: &[f64], t: f64) -> f64 {
        match self {
            FieldForm::Static { .. } => 0.0,
            FieldForm::Cos { amplitude, frequency, phase } => -amplitude * frequency * (frequency * t + phase).sin(),
            FieldForm::Sin { amplitude, frequency, phase } => amplitude * frequency * (frequency * t + phase).cos(),
            FieldForm::Modulated { profile, depth, frequency } => {
                profile.eval(x) * depth * frequency * (frequency * t).cos()
            }
        }
    }

    pub fn is_static(&self) -> bool {
        match self {
            FieldForm::Static { .. } => true,
            FieldForm::Cos { amplitude, frequency, .. } | FieldForm::Sin { amplitude, frequency, .. } => {
                *amplitude == 0.0 || *frequency == 0.0
            }
            FieldForm::Modulated { depth, frequency, .. } => *depth == 0.0 || *frequency == 0.0,
        }
    }

    fn negated(&self) -> Self {
        match self.clone() {
            FieldForm::Static { profile } => FieldForm::Static { profile: negate_spatial(profile) },
            FieldForm::Cos { amplitude, frequency, phase } => {
                FieldForm::Cos { amplitude: -amplitude, frequency, phase }
            }
            FieldForm::Sin { amplitude, frequency, phase } => {
                FieldForm::Sin { amplitude: -amplitude, frequency, phase }
            }
            FieldForm::Modulated { profile, depth, frequency } => {
                FieldForm::Modulated { profile: negate_spatial(profile), depth, frequency }
            }
        }
    }
}

fn negate_spatial(p: SpatialForm) -> SpatialForm {
    match p {
        SpatialForm::Zero => SpatialForm::Zero,
        SpatialForm::Constant { value } => SpatialForm::Constant { value: -value },
        SpatialForm::Harmonic { strength, center } => SpatialForm::Harmonic { strength: -strength, center },
        SpatialForm::Cosine { amplitude, period, phase } => {
            SpatialForm::Cosine { amplitude: -amplitude, period, phase }
        }
    }
}

/// Parameters of a two-photon Rabi drive with constant hyperfine splitting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RabiParams {
    pub omega_rabi: f64,
    pub omega_drive: f64,
    pub v_hf_const: f64,
}

impl RabiParams {
    /// Drive tuned to the hyperfine splitting, `V_hf = ω/2`.
    pub fn resonant(omega_rabi: f64, omega_drive: f64) -> Self {
        Self { omega_rabi, omega_drive, v_hf_const: 0.5 * omega_drive }
    }

    pub fn is_resonant(&self) -> bool {
        (self.v_hf_const - 0.5 * self.omega_drive).abs() <= 1e-12
    }
}

/// The five real component functions that make up `S(x, t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixPotential {
    pub trap_up: SpatialForm,
    pub trap_down: SpatialForm,
    pub b1: FieldForm,
    pub b2: FieldForm,
    pub v_hf: FieldForm,
}

impl Default for MatrixPotential {
    fn default() -> Self {
        Self::zero()
    }
}

impl MatrixPotential {
    pub fn zero() -> Self {
        Self {
            trap_up: SpatialForm::Zero,
            trap_down: SpatialForm::Zero,
            b1: FieldForm::zero(),
            b2: FieldForm::zero(),
            v_hf: FieldForm::zero(),
        }
    }

    /// Plane-rotating drive `B₁ − iB₂ = Ω e^{iωt}` with constant splitting.
    pub fn rabi_drive(rabi: RabiParams) -> Self {
        Self {
            trap_up: SpatialForm::Zero,
            trap_down: SpatialForm::Zero,
            b1: FieldForm::Cos { amplitude: rabi.omega_rabi, frequency: rabi.omega_drive, phase: 0.0 },
            b2: FieldForm::Sin { amplitude: -rabi.omega_rabi, frequency: rabi.omega_drive, phase: 0.0 },
            v_hf: FieldForm::constant(rabi.v_hf_const),
        }
    }

    pub fn with_traps(mut self, up: SpatialForm, down: SpatialForm) -> Self {
        self.trap_up = up;
        self.trap_down = down;
        self
    }

    /// The potential seen after exchanging the two spin labels.
    pub fn spin_swapped(&self) -> Self {
        Self {
            trap_up: self.trap_down.clone(),
            trap_down: self.trap_up.clone(),
            b1: self.b1.clone(),
            b2: self.b2.negated(),
            v_hf: self.v_hf.negated(),
        }
    }

    pub fn is_static(&self) -> bool {
        self.b1.is_static() && self.b2.is_static() && self.v_hf.is_static()
    }

    /// True when the off-diagonal (spin-flip) entries vanish identically.
    pub fn is_spin_diagonal(&self) -> bool {
        let zero = |f: &FieldForm| match f {
            FieldForm::Static { profile: SpatialForm::Zero } => true,
            FieldForm::Static { profile: SpatialForm::Constant { value } } => *value == 0.0,
            FieldForm::Cos { amplitude, .. } | FieldForm::Sin { amplitude, .. } => *amplitude == 0.0,
            _ => false,
        };
        zero(&self.b1) && zero(&self.b2)
    }

    pub fn assemble(&self, x: &[f64], t: f64) -> Result<Mat2> {
        let values = [
            ("trap_up", self.trap_up.eval(x)),
            ("trap_down", self.trap_down.eval(x)),
            ("b1", self.b1.eval(x, t)),
            ("b2", self.b2.eval(x, t)),
            ("v_hf", self.v_hf.eval(x, t)),
        ];
        for (field, value) in values {
            if !value.is_finite() {
                return Err(Error::Evaluation { field, x: x.to_vec(), t });
            }
        }
        let [up, down, b1, b2, hf] = values.map(|(_, v)| v);
        Ok(Mat2::new(C64::new(up - hf, 0.0), C64::new(b1, -b2), C64::new(b1, b2), C64::new(down + hf, 0.0)))
    }

    /// `∂S/∂t` at `(x, t)`; the traps do not depend on time.
    pub fn time_derivative(&self, x: &[f64], t: f64) -> Mat2 {
        let b1 = self.b1.time_derivative(x, t);
        let b2 = self.b2.time_derivative(x, t);
        let hf = self.v_hf.time_derivative(x, t);
        Mat2::new(C64::new(-hf, 0.0), C64::new(b1, -b2), C64::new(b1, b2), C64::new(hf, 0.0))
    }

    /// Largest spectral norm of `S` over the grid at the sampled times.
    pub fn max_norm_on_grid(&self, grid: &Grid, times: &[f64]) -> Result<f64> {
        let mut max = 0.0f64;
        for &t in times {
            for i in 0..grid.len() {
                let x = grid.position(i);
                max = max.max(self.assemble(&x[..grid.dim()], t)?.op_norm());
            }
        }
        Ok(max)
    }
}

/// Evaluate `S(x, t)` for a potential at a position.
#[allow(non_snake_case)]
pub fn assemble_S(p: &MatrixPotential, x: &[f64], t: f64) -> Result<Mat2> {
    p.assemble(x, t)
}
