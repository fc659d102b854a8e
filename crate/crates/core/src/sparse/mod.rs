//! Complex sparse storage, the direct solver used for every subproblem, and
//! restarted GMRES.

pub mod banded;
pub mod csr;
pub mod gmres;

pub use banded::BandedLu;
pub use csr::CsrMatrix;
pub use gmres::{gmres, GmresOptions, GmresOutcome};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Reusable factorization of a square matrix.
#[derive(Clone, Debug)]
pub struct Factorization {
    lu: BandedLu,
}

pub fn factorize(m: &CsrMatrix) -> Result<Factorization> {
    Ok(Factorization {
        lu: BandedLu::factorize(m)?,
    })
}

impl Factorization {
    pub fn dim(&self) -> usize {
        self.lu.dim()
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        self.lu.solve(b)
    }
}

/// `||M x - b||_inf <= tol (||M||_inf ||x||_inf + ||b||_inf)`.
pub fn residual_within(m: &CsrMatrix, x: &[Complex64], b: &[Complex64], tol: f64) -> Result<bool> {
    if b.len() != m.dim() {
        return Err(Error::Dimension {
            expected: m.dim(),
            got: b.len(),
        });
    }
    let mx = m.matvec(x)?;
    let res = mx.iter().zip(b).map(|(a, c)| (a - c).norm()).fold(0.0, f64::max);
    let xn = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let bn = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(res <= tol * (m.norm_inf() * xn + bn))
}
