//! Lanczos approximation of `exp(−iHτ)ψ` for Hermitian `H`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KrylovOptions {
    pub max_dim: usize,
    /// Bound on the a-posteriori error estimate per substep, relative to `‖ψ‖`.
    pub tol: f64,
    pub max_halvings: u32,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        Self { max_dim: 30, tol: 1e-12, max_halvings: 20 }
    }
}

/// `exp(−iHτ)ψ` with `H` given by its action. Splits `τ` into halves until
/// each Lanczos substep meets `opts.tol`.
pub fn expm_apply(
    apply: &impl Fn(&[C64], &mut [C64]),
    psi: &[C64],
    tau: f64,
    opts: &KrylovOptions,
) -> Result<Vec<C64>> {
    let mut out = psi.to_vec();
    let mut pieces = 1usize;
    let mut done = 0usize;
    let mut halvings = 0;
    // Walk through τ in pieces of τ/pieces, refining when a piece fails.
    while done < pieces {
        let step = tau / pieces as f64;
        match lanczos_step(apply, &out, step, opts)? {
            Ok(next) => {
                out = next;
                done += 1;
            }
            Err(residual) => {
                if halvings == opts.max_halvings {
                    return Err(Error::Accuracy { residual });
                }
                halvings += 1;
                pieces *= 2;
                done *= 2;
            }
        }
    }
    Ok(out)
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// One Lanczos exponential; the inner `Err` carries the estimated error
/// when the subspace limit is reached first.
fn lanczos_step(
    apply: &impl Fn(&[C64], &mut [C64]),
    psi: &[C64],
    tau: f64,
    opts: &KrylovOptions,
) -> Result<std::result::Result<Vec<C64>, f64>> {
    let n = psi.len();
    let beta0 = norm(psi);
    if beta0 == 0.0 {
        return Ok(Ok(psi.to_vec()));
    }
    let m_max = opts.max_dim.min(n).max(1);
    let mut basis: Vec<Vec<C64>> = vec![psi.iter().map(|z| z / beta0).collect()];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut estimate = f64::INFINITY;

    for j in 0..m_max {
        apply(&basis[j], &mut w);
        alpha.push(dot(&basis[j], &w).re);
        // two passes of classical Gram–Schmidt against the whole basis
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = norm(&w);
        let m = j + 1;
        let coeffs = tridiagonal_expm_e1(&alpha, &beta, tau);
        if b <= 1e-14 * alpha.iter().fold(1.0f64, |a, x| a.max(x.abs())) {
            // invariant subspace: the projection is exact
            return Ok(Ok(combine(&basis, &coeffs, beta0)));
        }
        estimate = b * coeffs[m - 1].norm();
        if estimate <= opts.tol {
            return Ok(Ok(combine(&basis, &coeffs, beta0)));
        }
        if m == m_max {
            break;
        }
        beta.push(b);
        basis.push(w.iter().map(|z| z / b).collect());
    }
    Ok(Err(estimate))
}

fn combine(basis: &[Vec<C64>], coeffs: &[C64], beta0: f64) -> Vec<C64> {
    let n = basis[0].len();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (v, c) in basis.iter().zip(coeffs) {
        let c = c * beta0;
        out.iter_mut().zip(v).for_each(|(o, x)| *o += c * x);
    }
    out
}

/// First column of `exp(−iTτ)` for the real symmetric tridiagonal `T`.
fn tridiagonal_expm_e1(alpha: &[f64], beta: &[f64], tau: f64) -> Vec<C64> {
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let q = &eig.eigenvectors;
    let phases: DVector<C64> =
        DVector::from_iterator(m, (0..m).map(|k| C64::from_polar(1.0, -eig.eigenvalues[k] * tau) * q[(0, k)]));
    (0..m).map(|i| (0..m).map(|k| q[(i, k)] * phases[k]).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> DMatrix<C64> {
        let a = DMatrix::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        (&a + a.adjoint()) * C64::new(0.5, 0.0)
    }

    fn dense_expm(h: &DMatrix<C64>, tau: f64) -> DMatrix<C64> {
        let eig = h.clone().symmetric_eigen();
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| C64::from_polar(1.0, -e * tau)));
        &eig.eigenvectors * d * eig.eigenvectors.adjoint()
    }

    #[test]
    fn agrees_with_dense_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [5, 40, 120] {
            let h = random_hermitian(n, &mut rng);
            let psi: Vec<C64> =
                (0..n).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let apply = |x: &[C64], y: &mut [C64]| {
                let r = &h * DVector::from_column_slice(x);
                y.copy_from_slice(r.as_slice());
            };
            let tau = 0.7;
            let got = expm_apply(&apply, &psi, tau, &KrylovOptions::default()).unwrap();
            let want = dense_expm(&h, tau) * DVector::from_column_slice(&psi);
            let err = got.iter().zip(want.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-10, "n = {n}: {err}");
        }
    }

    #[test]
    fn reports_failure_when_subspace_too_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = random_hermitian(50, &mut rng) * C64::new(100.0, 0.0);
        let psi: Vec<C64> = (0..50).map(|i| C64::new((i as f64).sin(), 0.0)).collect();
        let apply = |x: &[C64], y: &mut [C64]| {
            let r = &h * DVector::from_column_slice(x);
            y.copy_from_slice(r.as_slice());
        };
        let opts = KrylovOptions { max_dim: 3, tol: 1e-14, max_halvings: 1 };
        assert!(matches!(expm_apply(&apply, &psi, 1.0, &opts), Err(Error::Accuracy { .. })));
    }
}
