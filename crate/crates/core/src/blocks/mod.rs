//! Block-by-block recursion: every layer subproblem of the vertical sweep is
//! itself solved by a horizontal source-transfer sweep over blocks along x1,
//! and the block fields are patched together strip by strip.

use crate::error::{Error, Result};
use crate::fem::{ComplexField, Subproblem};
use crate::geometry::{Axis, AxisPartition};
use crate::pml::{validate_h2, PmlProfile, StretchSelector};
use crate::sparse::Factorization;
use crate::sweep::{DirectPairSolver, DirectionalSplit, LayerDecomposition, Ownership, PairSolver, SweepFields};

/// Block mode needs the same unstretched half width and saturation radius
/// on both axes, and the x1 PML must satisfy the block assumption.
pub fn validate_block_geometry(profile: &PmlProfile) -> Result<()> {
    if (profile.l[0] - profile.l[1]).abs() > 1e-12 || (profile.l_bar[0] - profile.l_bar[1]).abs() > 1e-12 {
        return Err(Error::Config(format!(
            "block mode needs l and l_bar equal on both axes, got l = {:?}, l_bar = {:?}",
            profile.l, profile.l_bar
        )));
    }
    let h2 = validate_h2(profile, profile.d[0]);
    if !h2.ok() {
        return Err(Error::Config(format!("block PML assumption violated: {}", h2.violations.join("; "))));
    }
    Ok(())
}

enum LayerBlocks {
    /// One block: the layer subproblem itself.
    Whole { sub: Subproblem, lu: Factorization },
    Split { split: DirectionalSplit, solver: DirectPairSolver },
}

/// Solves layer subproblems by horizontal block sweeps.
pub struct BlockLayerSolver {
    blocks: usize,
    layers: Vec<LayerBlocks>,
}

impl BlockLayerSolver {
    pub fn new(dec: &LayerDecomposition, blocks: usize) -> Result<Self> {
        if blocks == 0 {
            return Err(Error::Config("block count must be at least 1".into()));
        }
        let profile = dec.split.profile;
        validate_block_geometry(&profile)?;
        let partition = AxisPartition::new(profile.l[0], blocks)?;
        let d1 = profile.d[0];
        let mut layers = Vec::with_capacity(dec.layers() - 1);
        for i in 1..dec.layers() {
            let layer = dec.subproblem(i);
            if blocks == 1 {
                layers.push(LayerBlocks::Whole {
                    sub: layer.clone(),
                    lu: layer.factorize()?,
                });
                continue;
            }
            let mut subs = Vec::with_capacity(blocks - 1);
            for j in 1..blocks {
                let rect = layer
                    .grid
                    .rect()
                    .with_range(Axis::X1, (partition.zeta(j) - d1, partition.zeta(j + 2) + d1));
                let grid = layer.grid.subgrid(rect)?;
                let selector = StretchSelector::block_local(&profile, dec.partition(), i, &partition, j)?;
                subs.push(Subproblem::assemble(&grid, selector, &profile, dec.k)?);
            }
            let split = DirectionalSplit {
                axis: Axis::X1,
                partition: partition.clone(),
                parent: layer.grid.clone(),
                profile,
                ownership: Ownership::UpperClosed,
                rule: dec.split.rule,
                subs,
            };
            let solver = DirectPairSolver::new(&split).map_err(|e| Error::Solver(format!("layer {i}: {e}")))?;
            layers.push(LayerBlocks::Split { split, solver });
        }
        Ok(BlockLayerSolver { blocks, layers })
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn factorization_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| match l {
                LayerBlocks::Whole { .. } => 1,
                LayerBlocks::Split { solver, .. } => solver.factorization_count(),
            })
            .sum()
    }

    /// Horizontal sweeps for layer subproblem `i`, without the patching.
    pub fn block_sweeps(&self, i: usize, load: &ComplexField) -> Result<Option<SweepFields>> {
        match &self.layers[i - 1] {
            LayerBlocks::Whole { .. } => Ok(None),
            LayerBlocks::Split { split, solver } => {
                let loads = split.split_nodal(load)?;
                split.sweep(solver, &loads).map(Some)
            }
        }
    }
}

impl PairSolver for BlockLayerSolver {
    fn solve_pair(&self, i: usize, load: &ComplexField) -> Result<ComplexField> {
        match &self.layers[i - 1] {
            LayerBlocks::Whole { sub, lu } => {
                if load.grid != sub.grid {
                    return Err(Error::Grid(format!("load for layer {i} is on the wrong grid")));
                }
                sub.solve_with(lu, load)
            }
            LayerBlocks::Split { split, solver } => {
                if load.grid != split.parent {
                    return Err(Error::Grid(format!("load for layer {i} is on the wrong grid")));
                }
                let loads = split.split_nodal(load)?;
                let fields = split.sweep(solver, &loads).map_err(|e| match e {
                    Error::Solver(m) => Error::Solver(format!("layer {i}, {m}")),
                    other => other,
                })?;
                // Strip j takes u_{j-1}^+ + u_{j+1}^-, with the end strips
                // taking the single field that covers them.
                split.combine(&fields, 1.0)
            }
        }
    }
}
