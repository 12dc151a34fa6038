use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Piecewise-smooth radial profile `V(r)`, `r ≥ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum RadialProfile {
    /// `height` on `r < radius`.
    SquareWell {
        height: f64,
        radius: f64,
    },
    /// `height · (1 − r²/radius²)` on `r < radius`.
    Parabolic {
        height: f64,
        radius: f64,
    },
    /// `height` on `inner < r < outer`.
    Shell {
        height: f64,
        inner: f64,
        outer: f64,
    },
    /// `n² · base(n r)`.
    Scaled {
        base: Box<RadialProfile>,
        n: f64,
    },
    Sum {
        parts: Vec<RadialProfile>,
    },
}

impl RadialProfile {
    pub fn eval(&self, r: f64) -> f64 {
        self.eval_on_piece(r, r)
    }

    /// Evaluates the smooth branch selected by `probe`, so that
    /// integrating across `[a, b]` sees one branch up to both endpoints.
    pub(crate) fn eval_on_piece(&self, r: f64, probe: f64) -> f64 {
        match self {
            RadialProfile::SquareWell { height, radius } => {
                if probe < *radius {
                    *height
                } else {
                    0.0
                }
            }
            RadialProfile::Parabolic { height, radius } => {
                if probe < *radius {
                    height * (1.0 - (r / radius).powi(2))
                } else {
                    0.0
                }
            }
            RadialProfile::Shell { height, inner, outer } => {
                if probe > *inner && probe < *outer {
                    *height
                } else {
                    0.0
                }
            }
            RadialProfile::Scaled { base, n } => n * n * base.eval_on_piece(n * r, n * probe),
            RadialProfile::Sum { parts } => parts.iter().map(|p| p.eval_on_piece(r, probe)).sum(),
        }
    }

    /// Radii where the profile may fail to be smooth, ascending, excluding 0.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = match self {
            RadialProfile::SquareWell { radius, .. } | RadialProfile::Parabolic { radius, .. } => vec![*radius],
            RadialProfile::Shell { inner, outer, .. } => vec![*inner, *outer],
            RadialProfile::Scaled { base, n } => base.breakpoints().into_iter().map(|r| r / n).collect(),
            RadialProfile::Sum { parts } => parts.iter().flat_map(|p| p.breakpoints()).collect(),
        };
        out.retain(|r| *r > 0.0);
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs());
        out
    }

    pub fn support_radius(&self) -> f64 {
        self.breakpoints().last().copied().unwrap_or(0.0)
    }

    /// `n² V(n r)`.
    pub fn rescaled(&self, n: f64) -> Self {
        RadialProfile::Scaled { base: Box::new(self.clone()), n }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self {
            RadialProfile::SquareWell { height, radius } | RadialProfile::Parabolic { height, radius } => {
                height.is_finite() && *radius > 0.0 && radius.is_finite()
            }
            RadialProfile::Shell { height, inner, outer } => {
                height.is_finite() && *inner >= 0.0 && outer > inner && outer.is_finite()
            }
            RadialProfile::Scaled { base, n } => {
                base.validate()?;
                *n > 0.0 && n.is_finite()
            }
            RadialProfile::Sum { parts } => {
                for p in parts {
                    p.validate()?;
                }
                !parts.is_empty()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid radial profile {self:?}")))
        }
    }
}

/// A bounded, compactly supported radial potential.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialPotential {
    pub profile: RadialProfile,
    pub support_radius: f64,
    pub nonneg: bool,
}

impl RadialPotential {
    pub fn new(profile: RadialProfile) -> Result<Self> {
        profile.validate()?;
        let support_radius = profile.support_radius();
        if !(support_radius > 0.0) {
            return Err(Error::Config("potential needs a positive support radius".into()));
        }
        let nonneg = (0..=4096).all(|i| profile.eval(support_radius * i as f64 / 4096.0) >= 0.0);
        Ok(Self { profile, support_radius, nonneg })
    }

    pub fn square_well(height: f64, radius: f64) -> Result<Self> {
        Self::new(RadialProfile::SquareWell { height, radius })
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.profile.eval(r)
    }

    pub fn max_value(&self) -> f64 {
        (0..=4096).map(|i| self.profile.eval(self.support_radius * i as f64 / 4096.0)).fold(f64::MIN, f64::max)
    }
}

/// `r ↦ n² V(n r)` with support radius `R_V / n`.
pub fn rescale_potential(v: &RadialPotential, n: u64) -> Result<RadialPotential> {
    if n == 0 {
        return Err(Error::Config("rescaling needs n ≥ 1".into()));
    }
    if n == 1 {
        return Ok(v.clone());
    }
    RadialPotential::new(v.profile.rescaled(n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rescaling_scales_support_and_height() {
        let v = RadialPotential::new(RadialProfile::Parabolic { height: 3.0, radius: 2.0 }).unwrap();
        let v10 = rescale_potential(&v, 10).unwrap();
        assert!((v10.support_radius - 0.2).abs() < 1e-16);
        assert_eq!(v10.max_value() / v.max_value(), 100.0);
        assert_eq!(rescale_potential(&v, 1).unwrap(), v);
    }

    #[test]
    fn sign_detection() {
        let w = RadialProfile::Sum {
            parts: vec![
                RadialProfile::SquareWell { height: 1.0, radius: 1.0 },
                RadialProfile::Shell { height: -0.5, inner: 2.0, outer: 3.0 },
            ],
        };
        let v = RadialPotential::new(w).unwrap();
        assert!(!v.nonneg);
        assert_eq!(v.profile.breakpoints(), vec![1.0, 2.0, 3.0]);
        assert!(RadialPotential::square_well(2.0, 1.0).unwrap().nonneg);
    }

    #[test]
    fn piece_branch_selection() {
        let p = RadialProfile::SquareWell { height: 4.0, radius: 1.0 };
        assert_eq!(p.eval_on_piece(1.0, 0.5), 4.0);
        assert_eq!(p.eval_on_piece(1.0, 1.5), 0.0);
    }
}
