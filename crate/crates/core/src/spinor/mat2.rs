//! Dense 2×2 complex matrices acting on the spin index.

use num_complex::Complex64 as C64;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[C64::new(0.0, 0.0); 2]; 2]);
    pub const IDENTITY: Mat2 =
        Mat2([[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]]);

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn pauli_x() -> Self {
        Mat2::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn pauli_y() -> Self {
        Mat2::new(C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0))
    }

    pub fn pauli_z() -> Self {
        Mat2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn apply(&self, x: C64, y: C64) -> (C64, C64) {
        let m = &self.0;
        (m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Spectral norm.
    pub fn op_norm(&self) -> f64 {
        // singular values of M are sqrt of eigenvalues of M†M
        let h = self.adjoint() * *self;
        let tr = (h.0[0][0] + h.0[1][1]).re;
        let det = (h.0[0][0] * h.0[1][1] - h.0[0][1] * h.0[1][0]).re;
        let disc = (0.25 * tr * tr - det).max(0.0).sqrt();
        (0.5 * tr + disc).max(0.0).sqrt()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.adjoint()).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Decomposition `M = c0·I + c·σ` of a Hermitian matrix (real coefficients).
    pub fn pauli_coefficients(&self) -> (f64, [f64; 3]) {
        let m = &self.0;
        let c0 = 0.5 * (m[0][0].re + m[1][1].re);
        let cz = 0.5 * (m[0][0].re - m[1][1].re);
        let off = 0.5 * (m[0][1] + m[1][0].conj());
        (c0, [off.re, -off.im, cz])
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2::new(a[0][0] - b[0][0], a[0][1] - b[0][1], a[1][0] - b[1][0], a[1][1] - b[1][1])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

/// `exp(-i·M·dt)` for Hermitian `M`, in closed form.
///
/// With `M = c0·I + c·σ` and `r = |c|`,
/// `exp(-iM dt) = e^{-i c0 dt} (cos(r dt)·I − i sin(r dt)·(c·σ)/r)`.
pub fn matexp_2x2(m: &Mat2, dt: f64) -> Result<Mat2> {
    let scale = m.max_abs().max(1.0);
    let defect = m.hermiticity_defect();
    if defect > 1e-12 * scale {
        return Err(Error::Contract(format!("matrix is not Hermitian (defect {defect:e})")));
    }
    Ok(matexp_hermitian_unchecked(m, dt))
}

pub(crate) fn matexp_hermitian_unchecked(m: &Mat2, dt: f64) -> Mat2 {
    let (c0, [cx, cy, cz]) = m.pauli_coefficients();
    let r = (cx * cx + cy * cy + cz * cz).sqrt();
    let theta = r * dt;
    let cos = theta.cos();
    // sin(r dt)/r, continuous at r = 0
    let sinc = if theta.abs() < 1e-8 { dt * (1.0 - theta * theta / 6.0) } else { theta.sin() / r };
    let i = C64::i();
    let phase = C64::from_polar(1.0, -c0 * dt);
    // c·σ = [[cz, cx − i cy], [cx + i cy, −cz]]
    let a = C64::new(cos, 0.0) - i * sinc * cz;
    let d = C64::new(cos, 0.0) + i * sinc * cz;
    let b = -i * sinc * C64::new(cx, -cy);
    let c = -i * sinc * C64::new(cx, cy);
    Mat2::new(a, b, c, d).scale(phase)
}
