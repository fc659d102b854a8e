use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex matrix in compressed sparse row form with sorted column indices.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl CsrMatrix {
    /// Matrix with the given sparsity pattern and zero values. Each row's
    /// columns must be strictly increasing.
    pub fn from_pattern(n: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: rows.len(),
            });
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        row_ptr.push(0);
        for row in rows {
            if row.windows(2).any(|w| w[0] >= w[1]) || row.iter().any(|&c| c >= n) {
                return Err(Error::Solver("row pattern not strictly increasing or out of range".into()));
            }
            col_idx.extend(row);
            row_ptr.push(col_idx.len());
        }
        let nnz = col_idx.len();
        Ok(CsrMatrix {
            n,
            row_ptr,
            col_idx,
            values: vec![Complex64::new(0.0, 0.0); nnz],
        })
    }

    /// Builds from (row, col, value) triplets; duplicates are summed in input order.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, Complex64)]) -> Result<Self> {
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(r, c, _) in triplets {
            if r >= n || c >= n {
                return Err(Error::Solver(format!("triplet ({r}, {c}) outside {n} x {n}")));
            }
            rows[r].push(c);
        }
        for row in &mut rows {
            row.sort_unstable();
            row.dedup();
        }
        let mut m = CsrMatrix::from_pattern(n, rows)?;
        for &(r, c, v) in triplets {
            *m.entry_mut(r, c).expect("pattern contains every triplet") += v;
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CsrMatrix::from_pattern(n, (0..n).map(|i| vec![i]).collect()).expect("valid pattern");
        m.values.iter_mut().for_each(|v| *v = Complex64::new(1.0, 0.0));
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> (&[usize], &[Complex64]) {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        (&self.col_idx[a..b], &self.values[a..b])
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(p) => vals[p],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn entry_mut(&mut self, r: usize, c: usize) -> Option<&mut Complex64> {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        let p = self.col_idx[a..b].binary_search(&c).ok()?;
        Some(&mut self.values[a + p])
    }

    pub fn matvec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        for (r, yr) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(r);
            let mut s = Complex64::new(0.0, 0.0);
            for (c, v) in cols.iter().zip(vals) {
                s += v * x[*c];
            }
            *yr = s;
        }
        Ok(y)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|r| self.row(r).1.iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest `|j - i|` over stored entries, split as (below, above) the diagonal.
    pub fn bandwidths(&self) -> (usize, usize) {
        let mut kl = 0;
        let mut ku = 0;
        for r in 0..self.n {
            for &c in self.row(r).0 {
                if c < r {
                    kl = kl.max(r - c);
                } else {
                    ku = ku.max(c - r);
                }
            }
        }
        (kl, ku)
    }

    /// Whether `M == M^T` entry by entry (no conjugation).
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).all(|(&c, &v)| self.get(c, r) == v)
        })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }
}
