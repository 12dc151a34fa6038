use serde::Serialize;

use super::ode::{integrate, OdeOptions};
use super::profile::{RadialPotential, RadialProfile};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct SolverSettings {
    /// Uniform mesh points recorded per smooth piece of the profile.
    pub samples_per_piece: usize,
    /// The exterior mesh extends to `(1 + exterior_factor) · R_V`.
    pub exterior_factor: f64,
    pub ode: OdeOptions,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self { samples_per_piece: 256, exterior_factor: 1.0, ode: OdeOptions::default() }
    }
}

/// Zero-energy solution `f = w/(c r)` of `(−Δ + ½V) f = 0`, `f → 1`.
#[derive(Clone, Debug, Serialize)]
pub struct ScatteringSolution {
    pub r_grid: Vec<f64>,
    pub f_values: Vec<f64>,
    /// `w = r f` up to the factor `c`, and its derivative, on `r_grid`.
    pub w: Vec<f64>,
    pub dw: Vec<f64>,
    pub scattering_length: f64,
    /// Exterior slope `c` in `w = c (r − a)`.
    pub slope: f64,
    /// Sign changes of `w` on `r > 0`.
    pub nodes: usize,
    pub warning: Option<String>,
    /// Max deviation of the exterior mesh from the fitted line, relative to `max |w|`.
    pub fit_residual: f64,
    #[serde(skip)]
    pub(crate) profile: RadialProfile,
    #[serde(skip)]
    pub(crate) pieces: Vec<(f64, f64)>,
    #[serde(skip)]
    pub(crate) settings: SolverSettings,
}

pub(crate) struct Mesh {
    pub r: Vec<f64>,
    pub w: Vec<f64>,
    pub dw: Vec<f64>,
    pub nodes: usize,
}

impl Mesh {
    pub fn start(r0: f64, y0: [f64; 2]) -> Self {
        Self { r: vec![r0], w: vec![y0[0]], dw: vec![y0[1]], nodes: 0 }
    }

    pub fn state(&self) -> [f64; 2] {
        [*self.w.last().unwrap(), *self.dw.last().unwrap()]
    }

    pub fn end(&self) -> f64 {
        *self.r.last().unwrap()
    }
}

pub(crate) fn radial_rhs(profile: &RadialProfile, probe: f64) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] + '_ {
    move |r, y| [y[1], 0.5 * profile.eval_on_piece(r, probe) * y[0]]
}

/// Extends `mesh` across `[mesh.end(), b]`, one smooth piece of `profile`.
pub(crate) fn extend_piece(
    mesh: &mut Mesh,
    profile: &RadialProfile,
    b: f64,
    samples: usize,
    opts: &crate::scattering::ode::OdeOptions,
) -> Result<()> {
    let a = mesh.end();
    let probe = 0.5 * (a + b);
    let rhs = radial_rhs(profile, probe);
    let mut h = (b - a) / (4 * samples) as f64;
    let mut y = mesh.state();
    let mut sign = y[0].signum();
    for j in 1..=samples {
        let r0 = a + (b - a) * (j - 1) as f64 / samples as f64;
        let r1 = if j == samples { b } else { a + (b - a) * j as f64 / samples as f64 };
        y = integrate(&rhs, r0, y, r1, &mut h, opts, |r, s| {
            if r > 0.0 && s[0] != 0.0 {
                if sign != 0.0 && s[0].signum() != sign {
                    mesh.nodes += 1;
                }
                sign = s[0].signum();
            }
        })?;
        mesh.r.push(r1);
        mesh.w.push(y[0]);
        mesh.dw.push(y[1]);
    }
    Ok(())
}

fn piece_ends(profile: &RadialProfile, r_end: f64) -> Vec<f64> {
    let mut ends = profile.breakpoints();
    ends.retain(|&r| r < r_end);
    ends.push(r_end);
    ends
}

pub(crate) fn finish_solution(
    profile: RadialProfile,
    mesh: Mesh,
    support: f64,
    pieces: Vec<(f64, f64)>,
    settings: SolverSettings,
) -> Result<ScatteringSolution> {
    // exact exterior form w = c (r − a); least-squares line over the exterior mesh
    let ext: Vec<usize> = (0..mesh.r.len()).filter(|&i| mesh.r[i] >= support).collect();
    let k = ext.len() as f64;
    let (sx, sy) = ext.iter().fold((0.0, 0.0), |(a, b), &i| (a + mesh.r[i], b + mesh.w[i]));
    let (mx, my) = (sx / k, sy / k);
    let (sxx, sxy) = ext
        .iter()
        .fold((0.0, 0.0), |(a, b), &i| (a + (mesh.r[i] - mx).powi(2), b + (mesh.r[i] - mx) * (mesh.w[i] - my)));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let wmax = mesh.w.iter().fold(0.0f64, |a, w| a.max(w.abs()));
    let fit_residual =
        ext.iter().map(|&i| (mesh.w[i] - slope * mesh.r[i] - intercept).abs()).fold(0.0, f64::max) / wmax;
    if !(slope.is_finite()) || slope == 0.0 {
        return Err(Error::Tolerance("exterior solution has zero slope; scattering length undefined".into()));
    }
    let a = -intercept / slope;
    let f_values = mesh
        .r
        .iter()
        .zip(&mesh.w)
        .zip(&mesh.dw)
        .map(|((&r, &w), &dw)| if r == 0.0 { dw / slope } else { w / (slope * r) })
        .collect();
    let warning = (mesh.nodes > 0 || slope < 0.0).then(|| {
        format!(
            "zero-energy solution has {} node(s): the potential binds, scattering length is on a higher branch",
            mesh.nodes
        )
    });
    Ok(ScatteringSolution {
        r_grid: mesh.r,
        f_values,
        w: mesh.w,
        dw: mesh.dw,
        scattering_length: a,
        slope,
        nodes: mesh.nodes,
        warning,
        fit_residual,
        profile,
        pieces,
        settings,
    })
}

pub(crate) fn solve_profile(profile: &RadialProfile, settings: &SolverSettings) -> Result<ScatteringSolution> {
    let support = profile.support_radius();
    if !(support > 0.0) {
        return Err(Error::Config("profile has no support".into()));
    }
    let r_end = support * (1.0 + settings.exterior_factor);
    let mut mesh = Mesh::start(0.0, [0.0, 1.0]);
    let mut pieces = Vec::new();
    for b in piece_ends(profile, r_end) {
        let a = mesh.end();
        extend_piece(&mut mesh, profile, b, settings.samples_per_piece, &settings.ode)?;
        pieces.push((a, b));
    }
    finish_solution(profile.clone(), mesh, support, pieces, *settings)
}

/// Radial integration of `w'' = ½ V w`, `w(0) = 0`, `w'(0) = 1`; `a` from the
/// exterior line `w = c (r − a)`.
pub fn scattering_length(v: &RadialPotential, settings: &SolverSettings) -> Result<ScatteringSolution> {
    let sol = solve_profile(&v.profile, settings)?;
    if sol.fit_residual > 1e-10 {
        return Err(Error::Tolerance(format!("exterior fit residual {:e}", sol.fit_residual)));
    }
    Ok(sol)
}

impl ScatteringSolution {
    /// `f(r)`, re-integrating from the nearest mesh point below `r`.
    pub fn value_at(&self, r: f64) -> Result<f64> {
        let r = r.abs();
        let last = *self.r_grid.last().unwrap();
        if r >= last {
            return Ok(1.0 - self.scattering_length / r);
        }
        if r == 0.0 {
            return Ok(self.f_values[0]);
        }
        let i = self.r_grid.partition_point(|&x| x <= r) - 1;
        if self.r_grid[i] == r {
            return Ok(self.f_values[i]);
        }
        let &(a, b) = self
            .pieces
            .iter()
            .find(|(a, b)| *a <= r && r <= *b)
            .ok_or_else(|| Error::Structural(format!("radius {r} not covered by the mesh")))?;
        let rhs = radial_rhs(&self.profile, 0.5 * (a + b));
        let mut h = r - self.r_grid[i];
        let y = integrate(&rhs, self.r_grid[i], [self.w[i], self.dw[i]], r, &mut h, &self.settings.ode, |_, _| {})?;
        Ok(y[0] / (self.slope * r))
    }
}

/// Closed form for the square well, independent of the integrator.
pub fn square_well_scattering_length(height: f64, radius: f64) -> f64 {
    let kappa = (0.5 * height).sqrt();
    radius - (kappa * radius).tanh() / kappa
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::rescale_potential;

    fn settings() -> SolverSettings {
        SolverSettings::default()
    }

    #[test]
    fn square_well_matches_closed_form() {
        for (v0, r) in [(1.0, 1.0), (8.0, 0.5), (30.0, 2.0), (0.1, 3.0)] {
            let sol = scattering_length(&RadialPotential::square_well(v0, r).unwrap(), &settings()).unwrap();
            let want = square_well_scattering_length(v0, r);
            assert!(((sol.scattering_length - want) / want).abs() < 1e-8, "{v0} {r}");
            assert_eq!(sol.nodes, 0);
            assert!(sol.warning.is_none());
        }
    }

    #[test]
    fn zero_potential() {
        let sol = scattering_length(&RadialPotential::square_well(0.0, 1.0).unwrap(), &settings()).unwrap();
        assert!(sol.scattering_length.abs() < 1e-14);
        assert!(sol.f_values.iter().all(|f| (f - 1.0).abs() < 1e-13));
    }

    #[test]
    fn monotone_in_height() {
        let a: Vec<f64> = [1.0, 2.0, 4.0, 8.0]
            .iter()
            .map(|&v0| {
                scattering_length(&RadialPotential::square_well(v0, 1.0).unwrap(), &settings())
                    .unwrap()
                    .scattering_length
            })
            .collect();
        assert!(a.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn envelope_bounds() {
        let v = RadialPotential::new(RadialProfile::Parabolic { height: 6.0, radius: 1.5 }).unwrap();
        let sol = scattering_length(&v, &settings()).unwrap();
        let a = sol.scattering_length;
        for (&r, &f) in sol.r_grid.iter().zip(&sol.f_values) {
            assert!((-1e-12..=1.0 + 1e-12).contains(&f));
            if r > 0.0 {
                assert!(f >= 1.0 - a / r - 1e-12);
            }
        }
    }

    #[test]
    fn ode_residual_on_smooth_profile() {
        let v = RadialPotential::new(RadialProfile::Parabolic { height: 5.0, radius: 1.0 }).unwrap();
        let sol = scattering_length(&v, &settings()).unwrap();
        // fourth-order centred derivative of w' inside the first piece
        let h = sol.r_grid[1] - sol.r_grid[0];
        let worst = (2..254)
            .map(|i| {
                let d2 = (sol.dw[i - 2] - 8.0 * sol.dw[i - 1] + 8.0 * sol.dw[i + 1] - sol.dw[i + 2]) / (12.0 * h);
                (d2 - 0.5 * v.eval(sol.r_grid[i]) * sol.w[i]).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn rescaled_solution_is_resampled_base() {
        let v = RadialPotential::new(RadialProfile::Parabolic { height: 3.0, radius: 1.0 }).unwrap();
        let base = scattering_length(&v, &settings()).unwrap();
        for n in [2, 10, 100] {
            let vn = rescale_potential(&v, n).unwrap();
            let sol = scattering_length(&vn, &settings()).unwrap();
            assert!((sol.scattering_length * n as f64 / base.scattering_length - 1.0).abs() < 1e-9);
            for (i, f) in sol.f_values.iter().enumerate() {
                assert!((f - base.f_values[i]).abs() < 1e-9);
                assert!((sol.r_grid[i] * n as f64 - base.r_grid[i]).abs() < 1e-12 * base.r_grid[i].max(1.0));
            }
        }
    }

    #[test]
    fn value_at_between_mesh_points() {
        let v = RadialPotential::square_well(4.0, 1.0).unwrap();
        let sol = scattering_length(&v, &settings()).unwrap();
        let kappa = 2f64.sqrt();
        let a = sol.scattering_length;
        // interior: f = sinh(κr)/(κ r cosh(κR)) · R/(R − a) · (R − a)/R = sinh(κr)/(κ r cosh κR)
        for r in [0.123, 0.5001, 0.9999] {
            let want = (kappa * r).sinh() / (kappa * r * kappa.cosh());
            assert!((sol.value_at(r).unwrap() - want).abs() < 1e-10);
        }
        assert!((sol.value_at(7.0).unwrap() - (1.0 - a / 7.0)).abs() < 1e-15);
    }

    #[test]
    fn attractive_well_with_bound_state_warns() {
        // κR = 3 > π/2 for V = −2κ²
        let v = RadialPotential::square_well(-18.0, 1.0).unwrap();
        let sol = scattering_length(&v, &settings()).unwrap();
        assert!(sol.nodes >= 1);
        assert!(sol.warning.is_some());
    }
}
