use serde::Serialize;

use super::ode::integrate;
use super::profile::{RadialPotential, RadialProfile};
use super::solve::{
    extend_piece, finish_solution, radial_rhs, scattering_length, Mesh, ScatteringSolution, SolverSettings,
};
use crate::error::{Error, Result};

const PI: f64 = std::f64::consts::PI;
const SCAN_POINTS: usize = 64;

/// `V_N` together with the attractive shell `W_β` of height `4π a_N N^{3β}` on
/// `N^{−β} < r < R_β`, where `R_β` makes the scattering length of `V_N − W_β`
/// vanish.
#[derive(Clone, Debug, Serialize)]
pub struct ShellConstruction {
    pub beta: f64,
    pub n: u64,
    pub a_n: f64,
    pub w_height: f64,
    pub inner_radius: f64,
    pub outer_radius: f64,
    /// Support radius of `V_N`.
    pub v_support: f64,
    /// Scattering length of `V_N − W_β` at `outer_radius`.
    pub residual_scattering_length: f64,
    /// Search interval that contained the root.
    pub bracket: (f64, f64),
    /// More than one sign change was seen in the bracket scan.
    pub multiple_roots: bool,
    pub f_n: ScatteringSolution,
    pub f_beta: ScatteringSolution,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GNorms {
    pub l1: f64,
    pub l32: f64,
    pub l2: f64,
}

pub fn build_shell(v: &RadialPotential, beta: f64, n: u64, settings: &SolverSettings) -> Result<ShellConstruction> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Config(format!("beta must lie in (0, 1), got {beta}")));
    }
    let nf = n as f64;
    let v_n = super::rescale_potential(v, n)?;
    let inner = nf.powf(-beta);
    if inner <= v_n.support_radius {
        return Err(Error::Config(format!(
            "N^-β = {inner:e} does not clear the support {:e} of V_N; increase N or lower β",
            v_n.support_radius
        )));
    }
    let f_n = scattering_length(&v_n, settings)?;
    let a_n = f_n.scattering_length;
    let height = 4.0 * PI * a_n * nf.powf(3.0 * beta);

    // w, w' at the inner shell edge; V_N vanishes between its support and N^-β
    let mut mesh = Mesh::start(0.0, [0.0, 1.0]);
    let mut pieces = Vec::new();
    let mut ends = v_n.profile.breakpoints();
    ends.push(inner);
    for b in ends {
        let a = mesh.end();
        extend_piece(&mut mesh, &v_n.profile, b, settings.samples_per_piece, &settings.ode)?;
        pieces.push((a, b));
    }
    let y_inner = mesh.state();

    let shell = |outer: f64| RadialProfile::Shell { height: -height, inner, outer };
    // h(R) = R w'(R) − w(R) = c · a'(R); continuous in R, unlike a' itself
    let h_of = |outer: f64| -> Result<f64> {
        let profile = shell(outer);
        let rhs = radial_rhs(&profile, 0.5 * (inner + outer));
        let mut step = (outer - inner) / 64.0;
        let y = integrate(&rhs, inner, y_inner, outer, &mut step, &settings.ode, |_, _| {})?;
        Ok(outer * y[1] - y[0])
    };

    let mut found = None;
    let mut multiple = false;
    let mut bracket = (inner, 10.0 * inner);
    for widen in [10.0, 100.0] {
        bracket = (inner, widen * inner);
        let grid: Vec<f64> =
            (0..=SCAN_POINTS).map(|j| inner * (1.0 + (widen - 1.0) * j as f64 / SCAN_POINTS as f64)).collect();
        let values = grid.iter().map(|&r| h_of(r)).collect::<Result<Vec<f64>>>()?;
        let changes: Vec<usize> = (0..SCAN_POINTS).filter(|&j| values[j].signum() != values[j + 1].signum()).collect();
        if let Some(&j) = changes.first() {
            multiple = changes.len() > 1;
            found = Some((grid[j], values[j], grid[j + 1]));
            break;
        }
    }
    let (mut lo, mut h_lo, mut hi) = found.ok_or_else(|| {
        Error::Construction(format!(
            "no vanishing scattering length for R in [N^-β, 100 N^-β] (β = {beta}, N = {n}); the shell is too weak"
        ))
    })?;
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        let h_mid = h_of(mid)?;
        if h_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if h_mid.signum() == h_lo.signum() {
            lo = mid;
            h_lo = h_mid;
        } else {
            hi = mid;
        }
    }
    let outer = if h_of(lo)?.abs() <= h_of(hi)?.abs() { lo } else { hi };

    let profile = RadialProfile::Sum { parts: vec![v_n.profile.clone(), shell(outer)] };
    extend_piece(&mut mesh, &profile, outer, settings.samples_per_piece, &settings.ode)?;
    pieces.push((inner, outer));
    let r_end = outer * (1.0 + settings.exterior_factor);
    extend_piece(&mut mesh, &profile, r_end, 16, &settings.ode)?;
    pieces.push((outer, r_end));
    let [w, dw] = [mesh.w[mesh.w.len() - 17], mesh.dw[mesh.dw.len() - 17]];
    let residual = outer - w / dw;
    let f_beta = finish_solution(profile, mesh, outer, pieces, *settings)?;

    Ok(ShellConstruction {
        beta,
        n,
        a_n,
        w_height: height,
        inner_radius: inner,
        outer_radius: outer,
        v_support: v_n.support_radius,
        residual_scattering_length: residual,
        bracket,
        multiple_roots: multiple,
        f_n,
        f_beta,
    })
}

impl ShellConstruction {
    /// `g_β(r) = 1 − f_β(r)`; zero beyond `R_β`.
    pub fn g_value(&self, r: f64) -> Result<f64> {
        if r.abs() >= self.outer_radius {
            return Ok(0.0);
        }
        Ok(1.0 - self.f_beta.value_at(r)? / self.exterior_value())
    }

    // f_β is normalized by the exterior slope; with a' ≈ 0 its exterior value
    // is 1 − a'/r, so divide it out to make f_β exactly 1 at R_β
    fn exterior_value(&self) -> f64 {
        1.0 - self.f_beta.scattering_length / self.outer_radius
    }

    /// `(L¹, L^{3/2}, L²)` norms of `g_β` in three dimensions.
    pub fn g_norms(&self) -> Result<GNorms> {
        let sol = &self.f_beta;
        let c = sol.slope * self.exterior_value();
        let mut totals = [0.0f64; 3];
        for &(a, b) in sol.pieces.iter().filter(|(a, _)| *a < self.outer_radius) {
            let b = b.min(self.outer_radius);
            let i = sol.r_grid.partition_point(|&x| x < a);
            let probe = 0.5 * (a + b);
            let rhs = |r: f64, y: &[f64; 5]| {
                let f = if r == 0.0 { y[1] / c } else { y[0] / (c * r) };
                let g = (1.0 - f).abs();
                let s = 4.0 * PI * r * r;
                [y[1], 0.5 * sol.profile.eval_on_piece(r, probe) * y[0], s * g, s * g.powf(1.5), s * g * g]
            };
            let mut h = (b - a) / 256.0;
            let y = integrate(&rhs, a, [sol.w[i], sol.dw[i], 0.0, 0.0, 0.0], b, &mut h, &sol.settings.ode, |_, _| {})?;
            for k in 0..3 {
                totals[k] += y[k + 2];
            }
        }
        if totals.iter().any(|t| !t.is_finite()) {
            return Err(Error::Tolerance("g_β quadrature produced a non-finite value".into()));
        }
        Ok(GNorms { l1: totals[0], l32: totals[1].powf(2.0 / 3.0), l2: totals[2].sqrt() })
    }

    /// Norms of the envelope `a_N/r` on `[0, R_β]`.
    pub fn envelope_norms(&self) -> GNorms {
        let (a, r) = (self.a_n, self.outer_radius);
        GNorms {
            l1: 2.0 * PI * a * r * r,
            l32: (4.0 * PI * a.powf(1.5) * r.powf(1.5) / 1.5).powf(2.0 / 3.0),
            l2: (4.0 * PI * a * a * r).sqrt(),
        }
    }
}

pub fn g_beta_norms(s: &ShellConstruction) -> Result<GNorms> {
    s.g_norms()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> RadialPotential {
        RadialPotential::square_well(2.0, 1.0).unwrap()
    }

    #[test]
    fn scattering_length_vanishes_at_outer_radius() {
        for n in [100, 1000, 10_000] {
            let s = build_shell(&base(), 0.4, n, &SolverSettings::default()).unwrap();
            assert!(s.residual_scattering_length.abs() < 1e-10, "{n}: {}", s.residual_scattering_length);
            assert!(s.f_beta.scattering_length.abs() < 1e-10);
            assert!(s.inner_radius > s.v_support);
            assert!(!s.multiple_roots);
            let scaled = s.outer_radius * (n as f64).powf(0.4);
            assert!((1.0..1.5).contains(&scaled), "{scaled}");
        }
    }

    #[test]
    fn ordering_and_envelope() {
        let s = build_shell(&base(), 0.4, 1000, &SolverSettings::default()).unwrap();
        let ext = s.exterior_value();
        for (&r, &f) in s.f_beta.r_grid.iter().zip(&s.f_beta.f_values) {
            let fb = f / ext;
            let fn_ = s.f_n.value_at(r).unwrap();
            assert!(fn_ <= fb + 1e-12 && fb <= 1.0 + 1e-12 && fn_ >= -1e-12, "r = {r}");
            if r > 0.0 && r <= s.outer_radius {
                assert!(1.0 - fb <= s.a_n / r + 1e-12);
            }
            if r > s.outer_radius {
                assert!((fb - 1.0).abs() < 1e-8);
            }
        }
        let g = s.g_norms().unwrap();
        let e = s.envelope_norms();
        assert!(g.l1 <= e.l1 && g.l32 <= e.l32 && g.l2 <= e.l2);
    }

    #[test]
    fn rejects_overlapping_supports() {
        let wide = RadialPotential::square_well(2.0, 2.0).unwrap();
        assert!(matches!(build_shell(&wide, 0.9, 2, &SolverSettings::default()), Err(Error::Config(_))));
    }
}
