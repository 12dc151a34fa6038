use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic box in 1, 2 or 3 dimensions.
///
/// Points are stored row-major with the last axis fastest. Coordinates are
/// centred on the origin: `x_i = -L/2 + i * L/n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    points_per_axis: usize,
    box_length: Vec<f64>,
}

impl Grid {
    pub fn new(dim: usize, points_per_axis: usize, box_length: Vec<f64>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Config(format!("grid dimension must be 1, 2 or 3, got {dim}")));
        }
        if points_per_axis < 2 || !points_per_axis.is_power_of_two() {
            return Err(Error::Config(format!("points per axis must be a power of two >= 2, got {points_per_axis}")));
        }
        if box_length.len() != dim {
            return Err(Error::Config(format!("expected {dim} box lengths, got {}", box_length.len())));
        }
        if box_length.iter().any(|&l| !(l.is_finite() && l > 0.0)) {
            return Err(Error::Config("box lengths must be positive and finite".into()));
        }
        Ok(Self { dim, points_per_axis, box_length })
    }

    /// Same box length on every axis.
    pub fn cubic(dim: usize, points_per_axis: usize, length: f64) -> Result<Self> {
        Self::new(dim, points_per_axis, vec![length; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn box_length(&self) -> &[f64] {
        &self.box_length
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.box_length[axis] / self.points_per_axis as f64
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing(a)).product()
    }

    pub fn volume(&self) -> f64 {
        self.box_length.iter().product()
    }

    /// Multi-index of a flat point index.
    pub fn unravel(&self, mut index: usize) -> [usize; 3] {
        let n = self.points_per_axis;
        let mut out = [0; 3];
        for axis in (0..self.dim).rev() {
            out[axis] = index % n;
            index /= n;
        }
        out
    }

    pub fn position(&self, index: usize) -> [f64; 3] {
        let idx = self.unravel(index);
        let mut x = [0.0; 3];
        for axis in 0..self.dim {
            x[axis] = -0.5 * self.box_length[axis] + idx[axis] as f64 * self.spacing(axis);
        }
        x
    }

    /// Angular wavenumber of FFT bin `i` along `axis` (standard FFT ordering).
    pub fn wavenumber(&self, axis: usize, i: usize) -> f64 {
        let n = self.points_per_axis as i64;
        let signed = if (i as i64) < n / 2 { i as i64 } else { i as i64 - n };
        2.0 * std::f64::consts::PI * signed as f64 / self.box_length[axis]
    }

    /// |k|^2 for every point in FFT ordering.
    pub fn k_squared(&self) -> Vec<f64> {
        (0..self.len())
            .map(|flat| {
                let idx = self.unravel(flat);
                (0..self.dim).map(|a| self.wavenumber(a, idx[a]).powi(2)).sum()
            })
            .collect()
    }
}
