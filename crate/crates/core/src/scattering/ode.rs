//! Adaptive Dormand–Prince 5(4) for small fixed-size systems.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-300, max_steps: 1_000_000 }
    }
}

/// Integrates `y' = f(r, y)` from `r0` to exactly `r1`. `h` is the initial
/// step guess and is updated to the last accepted step size. `on_step` sees
/// every accepted state.
pub fn integrate<const K: usize>(
    f: &impl Fn(f64, &[f64; K]) -> [f64; K],
    r0: f64,
    y0: [f64; K],
    r1: f64,
    h: &mut f64,
    opts: &OdeOptions,
    mut on_step: impl FnMut(f64, &[f64; K]),
) -> Result<[f64; K]> {
    let span = r1 - r0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut r = r0;
    let mut y = y0;
    let mut step = h.abs().min(span.abs()).max(span.abs() * 1e-12) * dir;
    let mut k = [[0.0; K]; 7];
    k[0] = f(r, &y);
    for _ in 0..opts.max_steps {
        let last = (r + step - r1) * dir >= 0.0;
        if last {
            step = r1 - r;
        }
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..K {
                        ys[i] += step * a * kj[i];
                    }
                }
            }
            k[s] = f(r + C[s] * step, &ys);
        }
        let mut y5 = y;
        let mut err = 0.0f64;
        for i in 0..K {
            let mut d5 = 0.0;
            let mut d4 = 0.0;
            for s in 0..7 {
                d5 += B5[s] * k[s][i];
                d4 += B4[s] * k[s][i];
            }
            y5[i] += step * d5;
            let sc = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
            err = err.max((step * (d5 - d4)).abs() / sc);
        }
        if !err.is_finite() {
            return Err(Error::Tolerance(format!("non-finite error estimate at r = {r}")));
        }
        if err <= 1.0 {
            r = if last { r1 } else { r + step };
            y = y5;
            k[0] = k[6];
            on_step(r, &y);
            *h = step.abs();
            if last {
                return Ok(y);
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        step *= factor;
        if step.abs() <= 1e-15 * r.abs().max(span.abs()) {
            return Err(Error::Tolerance(format!("step size underflow at r = {r}")));
        }
    }
    Err(Error::Tolerance(format!("more than {} steps between {r0} and {r1}", opts.max_steps)))
}
