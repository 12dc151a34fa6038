use num_complex::Complex64 as C64;

use super::grid::Grid;
use crate::error::{Error, Result};

/// Two complex orbitals `(u, v)` sampled on a periodic grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField {
    pub grid: Grid,
    pub u: Vec<C64>,
    pub v: Vec<C64>,
}

impl SpinorField {
    pub fn new(grid: Grid, u: Vec<C64>, v: Vec<C64>) -> Result<Self> {
        let field = Self { grid, u, v };
        field.check_shape()?;
        Ok(field)
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        Self { grid, u: vec![C64::new(0.0, 0.0); n], v: vec![C64::new(0.0, 0.0); n] }
    }

    /// Fill both components from functions of position.
    pub fn from_fn(grid: Grid, mut u: impl FnMut(&[f64]) -> C64, mut v: impl FnMut(&[f64]) -> C64) -> Self {
        let dim = grid.dim();
        let (us, vs) = (0..grid.len())
            .map(|i| {
                let x = grid.position(i);
                (u(&x[..dim]), v(&x[..dim]))
            })
            .unzip();
        Self { grid, u: us, v: vs }
    }

    pub fn check_shape(&self) -> Result<()> {
        let n = self.grid.len();
        if self.u.len() != n || self.v.len() != n {
            return Err(Error::Structural(format!(
                "grid has {n} points but u has {} and v has {}",
                self.u.len(),
                self.v.len()
            )));
        }
        Ok(())
    }

    /// Cell-weighted squared L² norms of `u` and `v` separately.
    pub fn populations(&self) -> (f64, f64) {
        let w = self.grid.cell_volume();
        let pu: f64 = self.u.iter().map(|z| z.norm_sqr()).sum();
        let pv: f64 = self.v.iter().map(|z| z.norm_sqr()).sum();
        (w * pu, w * pv)
    }

    /// Cell-weighted inner product `⟨self, other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &SpinorField) -> Result<C64> {
        self.check_shape()?;
        other.check_shape()?;
        if self.grid != other.grid {
            return Err(Error::Structural("inner product of fields on different grids".into()));
        }
        let s: C64 = self.u.iter().zip(&other.u).chain(self.v.iter().zip(&other.v)).map(|(a, b)| a.conj() * b).sum();
        Ok(s * self.grid.cell_volume())
    }

    /// Pointwise total density `|u|² + |v|²`.
    pub fn density(&self) -> Vec<f64> {
        self.u.iter().zip(&self.v).map(|(a, b)| a.norm_sqr() + b.norm_sqr()).collect()
    }

    pub fn scale(&mut self, s: C64) {
        self.u.iter_mut().chain(self.v.iter_mut()).for_each(|z| *z *= s);
    }

    /// Rescale to unit norm; fails for the zero field.
    pub fn normalize(&mut self) -> Result<()> {
        let n2 = spinor_norm2(self)?;
        if !(n2 > 0.0 && n2.is_finite()) {
            return Err(Error::Contract("cannot normalize a zero or non-finite field".into()));
        }
        self.scale(C64::new(n2.sqrt().recip(), 0.0));
        Ok(())
    }

    pub fn all_finite(&self) -> bool {
        self.u.iter().chain(&self.v).all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn sup_norms(&self) -> (f64, f64) {
        let m = |xs: &[C64]| xs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        (m(&self.u), m(&self.v))
    }
}

/// Cell-weighted `Σ (|u|² + |v|²)`.
pub fn spinor_norm2(f: &SpinorField) -> Result<f64> {
    f.check_shape()?;
    let (pu, pv) = f.populations();
    Ok(pu + pv)
}

/// Check that a field is normalized within `tol`.
pub(crate) fn require_normalized(f: &SpinorField, tol: f64) -> Result<()> {
    let n2 = spinor_norm2(f)?;
    if (n2 - 1.0).abs() > tol {
        return Err(Error::Contract(format!("field must be normalized, got norm² = {n2}")));
    }
    Ok(())
}
