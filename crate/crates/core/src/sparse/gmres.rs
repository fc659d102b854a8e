//! Restarted GMRES with right preconditioning, so the monitored residual is
//! the residual of the original system.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GmresOptions {
    pub tol: f64,
    pub restart: usize,
    pub maxit: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions {
            tol: 1e-6,
            restart: 50,
            maxit: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GmresOutcome {
    pub x: Vec<Complex64>,
    /// Total Arnoldi steps taken.
    pub iterations: usize,
    /// Relative residual before the first step and after every step.
    pub residuals: Vec<f64>,
    pub converged: bool,
    /// Set when the Krylov space became invariant without reaching `tol`.
    pub breakdown: bool,
}

pub type LinearMap<'a> = dyn FnMut(&[Complex64]) -> Result<Vec<Complex64>> + 'a;

const BREAKDOWN: f64 = 1e-14;

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn gmres(
    apply: &mut LinearMap<'_>,
    mut precond: Option<&mut LinearMap<'_>>,
    b: &[Complex64],
    opts: &GmresOptions,
) -> Result<GmresOutcome> {
    if !(opts.tol > 0.0) || opts.restart == 0 {
        return Err(Error::Config("gmres needs tol > 0 and restart >= 1".into()));
    }
    let n = b.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut x = vec![zero; n];
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok(GmresOutcome {
            x,
            iterations: 0,
            residuals: vec![0.0],
            converged: true,
            breakdown: false,
        });
    }
    let mut residuals = vec![1.0];
    let mut iterations = 0;
    let mut r = b.to_vec();
    let mut breakdown = false;
    let m = opts.restart;

    while iterations < opts.maxit {
        let beta = norm(&r);
        if beta / bnorm <= opts.tol {
            return Ok(GmresOutcome {
                x,
                iterations,
                residuals,
                converged: true,
                breakdown: false,
            });
        }
        let mut v: Vec<Vec<Complex64>> = vec![r.iter().map(|z| z / beta).collect()];
        let mut h = vec![vec![zero; m]; m + 1];
        let mut cs = vec![0.0f64; m];
        let mut sn = vec![zero; m];
        let mut g = vec![zero; m + 1];
        g[0] = Complex64::new(beta, 0.0);
        let mut steps = 0;
        let mut invariant = false;
        for j in 0..m {
            if iterations >= opts.maxit {
                break;
            }
            let z = match precond.as_mut() {
                Some(p) => p(&v[j])?,
                None => v[j].clone(),
            };
            let mut w = apply(&z)?;
            // Modified Gram-Schmidt.
            for (i, vi) in v.iter().enumerate() {
                let hij = dot(vi, &w);
                h[i][j] = hij;
                for (wk, vk) in w.iter_mut().zip(vi) {
                    *wk -= hij * vk;
                }
            }
            let hn = norm(&w);
            h[j + 1][j] = Complex64::new(hn, 0.0);
            for i in 0..j {
                let t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
                h[i + 1][j] = -sn[i].conj() * h[i][j] + cs[i] * h[i + 1][j];
                h[i][j] = t;
            }
            let (a, bb) = (h[j][j], h[j + 1][j]);
            let rr = (a.norm_sqr() + bb.norm_sqr()).sqrt();
            if a.norm() == 0.0 {
                cs[j] = 0.0;
                sn[j] = Complex64::new(1.0, 0.0);
            } else {
                cs[j] = a.norm() / rr;
                sn[j] = a / a.norm() * bb.conj() / rr;
            }
            h[j][j] = cs[j] * a + sn[j] * bb;
            h[j + 1][j] = zero;
            g[j + 1] = -sn[j].conj() * g[j];
            g[j] *= cs[j];
            iterations += 1;
            steps = j + 1;
            let res = g[j + 1].norm() / bnorm;
            residuals.push(res);
            if hn <= BREAKDOWN * beta {
                invariant = true;
                break;
            }
            if res <= opts.tol {
                break;
            }
            v.push(w.iter().map(|z| z / hn).collect());
        }
        // Back substitution for the least-squares coefficients.
        let mut y = vec![zero; steps];
        for i in (0..steps).rev() {
            let mut s = g[i];
            for k in i + 1..steps {
                s -= h[i][k] * y[k];
            }
            if h[i][i] == zero {
                return Err(Error::Solver("gmres: singular Hessenberg system".into()));
            }
            y[i] = s / h[i][i];
        }
        let mut update = vec![zero; n];
        for (vi, yi) in v.iter().zip(&y) {
            for (u, vk) in update.iter_mut().zip(vi) {
                *u += yi * vk;
            }
        }
        let correction = match precond.as_mut() {
            Some(p) => p(&update)?,
            None => update,
        };
        for (xi, ci) in x.iter_mut().zip(&correction) {
            *xi += ci;
        }
        let ax = apply(&x)?;
        r = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let true_res = norm(&r) / bnorm;
        if true_res <= opts.tol {
            return Ok(GmresOutcome {
                x,
                iterations,
                residuals,
                converged: true,
                breakdown: false,
            });
        }
        if invariant {
            breakdown = true;
            break;
        }
    }
    Ok(GmresOutcome {
        x,
        iterations,
        residuals,
        converged: false,
        breakdown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn identity_in_one_step() {
        let b: Vec<_> = (0..7).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let mut a = |x: &[Complex64]| Ok(x.to_vec());
        let out = gmres(&mut a, None, &b, &GmresOptions::default()).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
        for (xi, bi) in out.x.iter().zip(&b) {
            assert!((xi - bi).norm() < 1e-14);
        }
    }

    #[test]
    fn diagonal_within_dimension() {
        let d: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let b = vec![c(1.0); 10];
        let mut a = |x: &[Complex64]| Ok(x.iter().zip(&d).map(|(v, s)| v * s).collect());
        let opts = GmresOptions {
            tol: 1e-12,
            ..Default::default()
        };
        let out = gmres(&mut a, None, &b, &opts).unwrap();
        assert!(out.converged);
        assert!(out.iterations <= 10);
        for (xi, di) in out.x.iter().zip(&d) {
            assert!((xi - c(1.0 / di)).norm() < 1e-10);
        }
    }

    #[test]
    fn exact_preconditioner_in_one_step() {
        let d: Vec<Complex64> = (1..=6).map(|i| Complex64::new(i as f64, -0.5)).collect();
        let b = vec![c(1.0); 6];
        let mut a = |x: &[Complex64]| Ok(x.iter().zip(&d).map(|(v, s)| v * s).collect());
        let mut p = |x: &[Complex64]| Ok(x.iter().zip(&d).map(|(v, s)| v / s).collect());
        let out = gmres(&mut a, Some(&mut p), &b, &GmresOptions::default()).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn zero_rhs() {
        let mut a = |x: &[Complex64]| Ok(x.to_vec());
        let out = gmres(&mut a, None, &[c(0.0); 3], &GmresOptions::default()).unwrap();
        assert_eq!(out.iterations, 0);
        assert!(out.converged);
    }

    #[test]
    fn restart_history_is_monotone_within_cycles() {
        // Nonsymmetric shifted tridiagonal system.
        let n = 40;
        let b: Vec<_> = (0..n).map(|i| Complex64::new(1.0, i as f64 * 0.1)).collect();
        let mut a = |x: &[Complex64]| {
            let mut y = vec![c(0.0); n];
            for i in 0..n {
                y[i] = Complex64::new(2.5, 0.3) * x[i];
                if i > 0 {
                    y[i] -= 1.3 * x[i - 1];
                }
                if i + 1 < n {
                    y[i] -= 0.7 * x[i + 1];
                }
            }
            Ok(y)
        };
        let opts = GmresOptions {
            tol: 1e-10,
            restart: 5,
            maxit: 500,
        };
        let out = gmres(&mut a, None, &b, &opts).unwrap();
        assert!(out.converged);
        for cycle in out.residuals[1..].chunks(5) {
            for w in cycle.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-12));
            }
        }
    }
}
