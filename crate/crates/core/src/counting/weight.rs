use serde::{Deserialize, Serialize};

pub const DEFAULT_XI: f64 = 0.1;

/// Which combination of shifted `m` weights an [`MVariant`](WeightKind::MVariant) stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MDifference {
    /// `m − m₁`
    A,
    /// `m − m₂`
    B,
    /// `m − 2m₂ + m₄`
    C,
    /// `m − m₁ − m₂ + m₃`
    D,
    /// `m − 2m₁ + m₂`
    E,
}

impl MDifference {
    pub const ALL: [MDifference; 5] = [Self::A, Self::B, Self::C, Self::D, Self::E];

    /// `(coefficient, shift)` pairs of the combination.
    pub fn terms(self) -> &'static [(f64, i64)] {
        match self {
            Self::A => &[(1.0, 0), (-1.0, 1)],
            Self::B => &[(1.0, 0), (-1.0, 2)],
            Self::C => &[(1.0, 0), (-2.0, 2), (1.0, 4)],
            Self::D => &[(1.0, 0), (-1.0, 1), (-1.0, 2), (1.0, 3)],
            Self::E => &[(1.0, 0), (-2.0, 1), (1.0, 2)],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::A => "a",
            Self::B => "b",
            Self::C => "c",
            Self::D => "d",
            Self::E => "e",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightKind {
    /// `√(k/N)`
    N,
    /// `√(k/N)` above `N^{1−2ξ}`, the tangent line `½(N^{−1+ξ} k + N^{−ξ})` below.
    M {
        xi: f64,
    },
    MVariant {
        xi: f64,
        variant: MDifference,
    },
    /// `values[k]` for `0 ≤ k < values.len()`, zero elsewhere.
    Custom {
        values: Vec<f64>,
    },
}

/// A weight `f(k)` indexed by the number `k` of particles outside the
/// condensate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightFunction {
    pub kind: WeightKind,
    pub n_particles: usize,
}

impl WeightFunction {
    pub fn n(n_particles: usize) -> Self {
        Self { kind: WeightKind::N, n_particles }
    }

    pub fn m(n_particles: usize, xi: f64) -> Self {
        Self { kind: WeightKind::M { xi }, n_particles }
    }

    pub fn custom(values: Vec<f64>) -> Self {
        let n_particles = values.len().saturating_sub(1);
        Self { kind: WeightKind::Custom { values }, n_particles }
    }

    pub fn crossover(&self) -> Option<f64> {
        match self.kind {
            WeightKind::M { xi } | WeightKind::MVariant { xi, .. } => {
                Some((self.n_particles as f64).powf(1.0 - 2.0 * xi))
            }
            _ => None,
        }
    }

    /// `m` on the real line; the formula is used for every `k`, including
    /// `k < 0` and `k > N`, so shifted weights stay smooth.
    pub(crate) fn m_real(n: f64, xi: f64, k: f64) -> f64 {
        if k >= n.powf(1.0 - 2.0 * xi) {
            (k / n).sqrt()
        } else {
            0.5 * (n.powf(-1.0 + xi) * k + n.powf(-xi))
        }
    }

    pub fn value_real(&self, k: f64) -> f64 {
        let n = self.n_particles as f64;
        match &self.kind {
            WeightKind::N => {
                if k <= 0.0 {
                    0.0
                } else {
                    (k / n).sqrt()
                }
            }
            WeightKind::M { xi } => Self::m_real(n, *xi, k),
            WeightKind::MVariant { xi, variant } => {
                variant.terms().iter().map(|(c, s)| c * Self::m_real(n, *xi, k + *s as f64)).sum()
            }
            WeightKind::Custom { values } => {
                if k >= 0.0 && k.fract() == 0.0 && (k as usize) < values.len() {
                    values[k as usize]
                } else {
                    0.0
                }
            }
        }
    }

    pub fn value(&self, k: i64) -> f64 {
        self.value_real(k as f64)
    }

    /// `max_{0 ≤ k ≤ N} |f(k)|`, the operator norm of `f̂`.
    pub fn sup_on_range(&self) -> f64 {
        (0..=self.n_particles as i64).map(|k| self.value(k).abs()).fold(0.0, f64::max)
    }
}

/// `m̂^a … m̂^e` for the given `m` weight.
pub fn build_m_variants(weight_m: &WeightFunction) -> crate::error::Result<[WeightFunction; 5]> {
    let WeightKind::M { xi } = weight_m.kind else {
        return Err(crate::error::Error::Contract("m variants need an m weight".into()));
    };
    Ok(MDifference::ALL.map(|variant| WeightFunction {
        kind: WeightKind::MVariant { xi, variant },
        n_particles: weight_m.n_particles,
    }))
}
