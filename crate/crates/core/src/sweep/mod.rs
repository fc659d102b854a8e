//! Layer-by-layer source transfer on the truncated domain: an upward and a
//! downward sweep of local PML solves over horizontal layers, recombined as
//! `v = -(u_{i-1}^+ + u_{i+1}^-)` on layer `i`.

pub mod engine;

use num_complex::Complex64;

pub use engine::{DirectionalSplit, Ownership, PairSolver, SweepFields, TransferState};

use crate::error::{Error, Result};
use crate::fem::{assemble_volume_load, ComplexField, StructuredGrid, Subproblem, TransferRule};
use crate::geometry::{Axis, AxisPartition, Rect};
use crate::pml::{PmlProfile, StretchSelector};
use crate::sparse::Factorization;

/// Horizontal layers of the truncated domain and their local PML subproblems.
#[derive(Clone, Debug)]
pub struct LayerDecomposition {
    pub k: f64,
    pub split: DirectionalSplit,
}

impl LayerDecomposition {
    /// `grid` must cover the outer box of `profile` and align with every
    /// layer interface shifted by the PML thickness.
    pub fn new(grid: &StructuredGrid, profile: &PmlProfile, k: f64, layers: usize, rule: TransferRule) -> Result<Self> {
        if layers < 2 {
            return Err(Error::Config(format!(
                "a layer sweep needs at least 2 layers, got {layers}; use the direct solver"
            )));
        }
        let outer = profile.outer_box();
        let gr = grid.rect();
        for axis in [Axis::X1, Axis::X2] {
            let (a, b) = gr.range(axis);
            let (c, d) = outer.range(axis);
            if (a - c).abs() > 1e-9 * grid.h(axis) || (b - d).abs() > 1e-9 * grid.h(axis) {
                return Err(Error::Grid(format!("grid {gr:?} does not match the PML box {outer:?}")));
            }
        }
        let partition = AxisPartition::new(profile.l[1], layers)?;
        let d2 = profile.d[1];
        let mut subs = Vec::with_capacity(layers - 1);
        for i in 1..layers {
            let rect = gr.with_range(Axis::X2, (partition.zeta(i) - d2, partition.zeta(i + 2) + d2));
            let sub_grid = grid.subgrid(rect)?;
            let selector = StretchSelector::layer_local(profile, &partition, i)?;
            subs.push(Subproblem::assemble(&sub_grid, selector, profile, k)?);
        }
        Ok(LayerDecomposition {
            k,
            split: DirectionalSplit {
                axis: Axis::X2,
                partition,
                parent: grid.clone(),
                profile: *profile,
                ownership: Ownership::LowerClosed,
                rule,
                subs,
            },
        })
    }

    pub fn layers(&self) -> usize {
        self.split.count()
    }

    pub fn grid(&self) -> &StructuredGrid {
        &self.split.parent
    }

    pub fn partition(&self) -> &AxisPartition {
        &self.split.partition
    }

    /// The local PML subproblem on `(zeta_i - d, zeta_{i+2} + d)`.
    pub fn subproblem(&self, i: usize) -> &Subproblem {
        self.split.sub(i)
    }

    /// Layer `i` as a source region: outer layers extend to infinity so
    /// that the layers tile the plane.
    pub fn source_region(&self, i: usize) -> Rect {
        let p = self.partition();
        let lo = if i == 1 { f64::NEG_INFINITY } else { p.zeta(i) };
        let hi = if i == p.count() { f64::INFINITY } else { p.zeta(i + 1) };
        Rect::new((f64::NEG_INFINITY, f64::INFINITY), (lo, hi))
    }

    /// Positive loads `<J f_i, phi>` of the restrictions of `f` to each
    /// layer; an element belongs to the layer containing its centre.
    pub fn split_volume_source(&self, f: &(dyn Fn([f64; 2]) -> Complex64 + Sync)) -> Vec<ComplexField> {
        let selector = StretchSelector::global(&self.split.profile);
        (1..=self.layers())
            .map(|i| {
                let mut load = assemble_volume_load(self.grid(), &selector, &self.split.profile, f, Some(self.source_region(i)));
                load.scale(Complex64::new(-1.0, 0.0));
                load
            })
            .collect()
    }

    /// Splits a nodal load on the global grid by node ownership.
    pub fn split_nodal_load(&self, load: &ComplexField) -> Result<Vec<ComplexField>> {
        self.split.split_nodal(load)
    }

    pub fn sweep(&self, solver: &dyn PairSolver, loads: &[ComplexField]) -> Result<SweepFields> {
        self.split.sweep(solver, loads)
    }

    /// `v = -(u_{i-1}^+ + u_{i+1}^-)` on each layer.
    pub fn combine(&self, fields: &SweepFields) -> Result<ComplexField> {
        self.split.combine(fields, -1.0)
    }

    /// Both sweeps and the combination: the approximate solution of the
    /// global system whose right-hand side is `-(sum of loads)`.
    pub fn solve(&self, solver: &dyn PairSolver, loads: &[ComplexField]) -> Result<(ComplexField, SweepFields)> {
        let fields = self.sweep(solver, loads)?;
        Ok((self.combine(&fields)?, fields))
    }
}

/// Exact subproblem solves with one factorization per subproblem, shared
/// by both sweep directions.
#[derive(Debug)]
pub struct DirectPairSolver {
    subs: Vec<Subproblem>,
    lus: Vec<Factorization>,
}

impl DirectPairSolver {
    pub fn new(split: &DirectionalSplit) -> Result<Self> {
        let lus = split
            .subs
            .iter()
            .enumerate()
            .map(|(m, s)| {
                s.factorize().map_err(|e| match e {
                    Error::Singular { index } => Error::Solver(format!("subproblem {}: zero pivot at index {index}", m + 1)),
                    other => other,
                })
            })
            .collect::<Result<_>>()?;
        Ok(DirectPairSolver {
            subs: split.subs.clone(),
            lus,
        })
    }

    pub fn factorization_count(&self) -> usize {
        self.lus.len()
    }
}

impl PairSolver for DirectPairSolver {
    fn solve_pair(&self, i: usize, load: &ComplexField) -> Result<ComplexField> {
        let s = &self.subs[i - 1];
        if load.grid != s.grid {
            return Err(Error::Grid(format!("load for subproblem {i} is on the wrong grid")));
        }
        s.solve_with(&self.lus[i - 1], load)
    }
}
