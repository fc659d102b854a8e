//! Banded LU with partial pivoting in LAPACK `gbtrf` storage: entry `(i, j)`
//! lives at `ab[j * ld + kl + ku + i - j]`, leaving `kl` extra rows above the
//! band for the fill created by row interchanges.

use num_complex::Complex64;

use super::csr::CsrMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    ld: usize,
    ab: Vec<Complex64>,
    pivots: Vec<usize>,
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

impl BandedLu {
    /// Factorizes `m`. Pivots are chosen by largest modulus in the column;
    /// ties go to the smallest row index.
    pub fn factorize(m: &CsrMatrix) -> Result<Self> {
        let n = m.dim();
        let (kl, ku) = m.bandwidths();
        let ld = 2 * kl + ku + 1;
        let mut ab = vec![ZERO; ld * n];
        let off = kl + ku;
        for r in 0..n {
            let (cols, vals) = m.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                ab[c * ld + off + r - c] = v;
            }
        }
        let mut pivots = vec![0usize; n];
        // Upper bandwidth of U after interchanges.
        let kv = kl + ku;
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let col = k * ld;
            let mut p = k;
            let mut best = ab[col + off].norm_sqr();
            for i in k + 1..=last_row {
                let v = ab[col + off + i - k].norm_sqr();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            pivots[k] = p;
            if best == 0.0 {
                return Err(Error::Singular { index: k });
            }
            let last_col = (k + kv).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    let base = j * ld + off;
                    ab.swap(base + k - j, base + p - j);
                }
            }
            let inv = 1.0 / ab[col + off];
            for i in k + 1..=last_row {
                ab[col + off + i - k] *= inv;
            }
            if last_row == k {
                continue;
            }
            for j in k + 1..=last_col {
                let base = j * ld + off;
                let ukj = ab[base + k - j];
                if ukj == ZERO {
                    continue;
                }
                for i in k + 1..=last_row {
                    let l = ab[col + off + i - k];
                    ab[base + i - j] -= l * ukj;
                }
            }
        }
        Ok(BandedLu {
            n,
            kl,
            ku,
            ld,
            ab,
            pivots,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    /// Memory held by the factors, in complex entries.
    pub fn storage(&self) -> usize {
        self.ab.len()
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    pub fn solve_in_place(&self, x: &mut [Complex64]) -> Result<()> {
        let n = self.n;
        if x.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: x.len(),
            });
        }
        let (kl, ld) = (self.kl, self.ld);
        let off = self.kl + self.ku;
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                x.swap(k, p);
            }
            let xk = x[k];
            if xk == ZERO {
                continue;
            }
            let last_row = (k + kl).min(n - 1);
            let col = k * ld + off;
            for i in k + 1..=last_row {
                x[i] -= self.ab[col + i - k] * xk;
            }
        }
        let kv = off;
        for k in (0..n).rev() {
            let col = k * ld + off;
            let xk = x[k] / self.ab[col];
            x[k] = xk;
            if xk == ZERO {
                continue;
            }
            let first = k.saturating_sub(kv);
            for i in first..k {
                x[i] -= self.ab[col + i - k] * xk;
            }
        }
        Ok(())
    }
}
