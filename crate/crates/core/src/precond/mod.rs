//! One pass of the layer sweep used as an approximate inverse of the global
//! PML system, for right-preconditioned GMRES.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fem::{ComplexField, DofMap, StructuredGrid, Subproblem, TransferRule};
use crate::harness::global_subproblem;
use crate::pml::PmlProfile;
use crate::sparse::Factorization;
use crate::sweep::{DirectPairSolver, LayerDecomposition};

/// Identifies the discrete problem a context was built for.
pub fn fingerprint(grid: &StructuredGrid, profile: &PmlProfile, k: f64, layers: usize, rule: TransferRule) -> u64 {
    let mut h = DefaultHasher::new();
    let (x, y) = (grid.x_range(), grid.y_range());
    for v in [x.0, x.1, y.0, y.1, k, profile.gamma0] {
        v.to_bits().hash(&mut h);
    }
    for j in 0..2 {
        for v in [profile.l[j], profile.l_bar[j], profile.d[j]] {
            v.to_bits().hash(&mut h);
        }
    }
    (grid.nx(), grid.ny(), layers).hash(&mut h);
    (rule == TransferRule::Nodal).hash(&mut h);
    h.finish()
}

enum Inner {
    /// A single layer: the exact global solve.
    Exact { sub: Subproblem, lu: Factorization },
    Layers { dec: LayerDecomposition, solver: DirectPairSolver },
}

pub struct PreconditionerContext {
    grid: StructuredGrid,
    dofs: DofMap,
    fingerprint: u64,
    factorizations: usize,
    applications: AtomicUsize,
    inner: Inner,
}

impl PreconditionerContext {
    pub fn build(grid: &StructuredGrid, profile: &PmlProfile, k: f64, layers: usize, rule: TransferRule) -> Result<Self> {
        if layers == 0 {
            return Err(Error::Config("layer count must be at least 1".into()));
        }
        let inner = if layers == 1 {
            let sub = global_subproblem(grid, profile, k)?;
            let lu = sub.factorize()?;
            Inner::Exact { sub, lu }
        } else {
            let dec = LayerDecomposition::new(grid, profile, k, layers, rule)?;
            let solver = DirectPairSolver::new(&dec.split)?;
            Inner::Layers { dec, solver }
        };
        let factorizations = match &inner {
            Inner::Exact { .. } => 1,
            Inner::Layers { solver, .. } => solver.factorization_count(),
        };
        Ok(PreconditionerContext {
            grid: grid.clone(),
            dofs: DofMap::new(grid),
            fingerprint: fingerprint(grid, profile, k, layers, rule),
            factorizations,
            applications: AtomicUsize::new(0),
            inner,
        })
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Factorizations computed while building; applications never add any.
    pub fn factorizations(&self) -> usize {
        self.factorizations
    }

    pub fn applications(&self) -> usize {
        self.applications.load(Ordering::Relaxed)
    }

    /// Interior-node numbering of the global system this context inverts.
    pub fn dofs(&self) -> &DofMap {
        &self.dofs
    }

    /// Approximate solution of `M z = r` for `r` in interior-node numbering.
    pub fn apply(&self, r: &[Complex64]) -> Result<Vec<Complex64>> {
        if r.len() != self.dofs.len() {
            return Err(Error::Dimension {
                expected: self.dofs.len(),
                got: r.len(),
            });
        }
        self.applications.fetch_add(1, Ordering::Relaxed);
        if r.iter().all(|v| *v == Complex64::new(0.0, 0.0)) {
            return Ok(vec![Complex64::new(0.0, 0.0); r.len()]);
        }
        match &self.inner {
            Inner::Exact { lu, .. } => lu.solve(r),
            Inner::Layers { dec, solver } => {
                // The sweep solves with positive loads and returns the field
                // for their negative, so it is fed `-r`.
                let mut load: ComplexField = self.dofs.scatter(&self.grid, r);
                load.scale(Complex64::new(-1.0, 0.0));
                let loads = dec.split_nodal_load(&load)?;
                let (v, _) = dec.solve(solver, &loads)?;
                Ok(self.dofs.gather(&v))
            }
        }
    }

    /// The global matrix, when the context holds it (single layer only).
    pub fn exact_subproblem(&self) -> Option<&Subproblem> {
        match &self.inner {
            Inner::Exact { sub, .. } => Some(sub),
            Inner::Layers { .. } => None,
        }
    }
}
