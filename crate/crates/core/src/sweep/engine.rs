//! Two-directional source transfer over a one-axis split of a parent grid.
//!
//! Piece `i` is `[zeta_i, zeta_{i+1}]` along `axis`; subproblem `i` covers
//! pieces `i` and `i + 1` plus a PML margin and is shared by the plus sweep
//! (which solves it for `u_i^+`) and the minus sweep (for `u_{i+1}^-`).
//! Loads are positive functionals: every subproblem solve is `M u = load`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fem::{assemble_transfer_load, locality_defect, ComplexField, CutoffSpec, Orientation, StructuredGrid, Subproblem, TransferRule};
use crate::geometry::{Axis, AxisPartition, Rect};
use crate::pml::PmlProfile;

/// Which piece owns nodes lying exactly on an interface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ownership {
    /// `[zeta_i, zeta_{i+1})`.
    LowerClosed,
    /// `(zeta_i, zeta_{i+1}]`.
    UpperClosed,
}

/// Solver for the subproblem shared by pieces `i` and `i + 1`.
pub trait PairSolver: Sync {
    /// `load` and the result live on `split.subs[i - 1].grid`.
    fn solve_pair(&self, i: usize, load: &ComplexField) -> Result<ComplexField>;
}

#[derive(Clone, Debug)]
pub struct DirectionalSplit {
    pub axis: Axis,
    pub partition: AxisPartition,
    pub parent: StructuredGrid,
    pub profile: PmlProfile,
    pub ownership: Ownership,
    pub rule: TransferRule,
    /// `subs[i - 1]` for `i = 1..count-1`.
    pub subs: Vec<Subproblem>,
}

/// A transferred source handed from one subproblem to the next.
#[derive(Clone, Debug)]
pub struct TransferState {
    /// Piece the source lives in.
    pub target: usize,
    pub cutoff: CutoffSpec,
    /// Load on the grid of the subproblem that consumes it.
    pub load: ComplexField,
    /// Largest entry outside the target piece, relative to the largest entry.
    pub locality_defect: f64,
}

#[derive(Clone, Debug)]
pub struct SweepFields {
    /// `u_i^+` for `i = 1..count-1`, on subproblem `i`.
    pub plus: Vec<ComplexField>,
    /// `u_i^-` for `i = 2..count`, on subproblem `i - 1`.
    pub minus: Vec<ComplexField>,
    pub transfers: Vec<TransferState>,
}

fn tag(what: &str, i: usize, e: Error) -> Error {
    match e {
        Error::Singular { index } => Error::Solver(format!("{what} {i}: zero pivot at index {index}")),
        other => other,
    }
}

impl DirectionalSplit {
    pub fn count(&self) -> usize {
        self.partition.count()
    }

    pub fn sub(&self, i: usize) -> &Subproblem {
        &self.subs[i - 1]
    }

    /// Closed piece `i` within the parent grid.
    pub fn piece_rect(&self, i: usize) -> Rect {
        self.parent
            .rect()
            .with_range(self.axis, (self.partition.zeta(i), self.partition.zeta(i + 1)))
    }

    /// Owning piece of a parent-grid coordinate along the split axis.
    pub fn owner(&self, t: f64) -> usize {
        let tol = 1e-9 * self.parent.h(self.axis);
        match self.ownership {
            Ownership::LowerClosed => self.partition.owner_lower_closed(t, tol),
            Ownership::UpperClosed => self.partition.owner_upper_closed(t, tol),
        }
    }

    /// Splits a parent-grid load by node ownership.
    pub fn split_nodal(&self, load: &ComplexField) -> Result<Vec<ComplexField>> {
        if load.grid != self.parent {
            return Err(Error::Grid("load does not live on the parent grid".into()));
        }
        let mut out = vec![ComplexField::zeros(&self.parent); self.count()];
        let g = &self.parent;
        for j in 0..g.ny() {
            for i in 0..g.nx() {
                let t = g.point(i, j)[self.axis.index()];
                let id = g.node_id(i, j);
                out[self.owner(t) - 1].values[id] = load.values[id];
            }
        }
        Ok(out)
    }

    fn check_loads(&self, loads: &[ComplexField]) -> Result<()> {
        if loads.len() != self.count() {
            return Err(Error::Dimension {
                expected: self.count(),
                got: loads.len(),
            });
        }
        if loads.iter().any(|l| l.grid != self.parent) {
            return Err(Error::Grid("piece loads must live on the parent grid".into()));
        }
        Ok(())
    }

    /// Transferred source of subproblem `s` after solving for `u` with
    /// right-hand side `current + next`, masked to piece `target` and moved to
    /// the grid of subproblem `dest`.
    #[allow(clippy::too_many_arguments)]
    fn transfer(
        &self,
        s: usize,
        u: &ComplexField,
        current: &ComplexField,
        next: &ComplexField,
        target: usize,
        orientation: Orientation,
        dest: usize,
    ) -> Result<TransferState> {
        let sub = self.sub(s);
        let cutoff = CutoffSpec::new(&self.partition, target, orientation, self.axis);
        // Adding `next` turns `current - M(beta u)` into the whole source of
        // the target piece.
        let mut psi = assemble_transfer_load(sub, &self.profile, u, &cutoff, current, next, self.rule)?;
        psi.axpy(Complex64::new(1.0, 0.0), next);
        let piece = self.piece_rect(target);
        let defect = locality_defect(&psi, piece);
        let tol = 1e-9 * sub.grid.h(self.axis);
        for j in 0..sub.grid.ny() {
            for i in 0..sub.grid.nx() {
                if !piece.contains(sub.grid.point(i, j), tol) {
                    psi.values[sub.grid.node_id(i, j)] = Complex64::new(0.0, 0.0);
                }
            }
        }
        let mut load = ComplexField::zeros(&self.sub(dest).grid);
        load.add_overlap(&psi)?;
        Ok(TransferState {
            target,
            cutoff,
            load,
            locality_defect: defect,
        })
    }

    /// Plus sweep: `u_i^+` solves subproblem `i` with `f^_i + f_{i+1}`.
    pub fn sweep_plus(&self, solver: &dyn PairSolver, loads: &[ComplexField]) -> Result<(Vec<ComplexField>, Vec<TransferState>)> {
        self.check_loads(loads)?;
        let n = self.count();
        let mut fields = Vec::with_capacity(n - 1);
        let mut transfers = Vec::new();
        let mut current = loads[0].restrict(&self.sub(1).grid)?;
        for i in 1..n {
            let grid = &self.sub(i).grid;
            let next = loads[i].restrict(grid)?;
            let mut rhs = current.clone();
            rhs.axpy(Complex64::new(1.0, 0.0), &next);
            let u = solver.solve_pair(i, &rhs).map_err(|e| tag("subproblem", i, e))?;
            if i + 1 < n {
                let t = self.transfer(i, &u, &current, &next, i + 1, Orientation::Plus, i + 1)?;
                current = t.load.clone();
                transfers.push(t);
            }
            fields.push(u);
        }
        Ok((fields, transfers))
    }

    /// Minus sweep: `u_i^-` solves subproblem `i - 1` with `f^_i` only, the
    /// last one (`i = 2`) with `f^_2 + f_1`.
    pub fn sweep_minus(&self, solver: &dyn PairSolver, loads: &[ComplexField]) -> Result<(Vec<ComplexField>, Vec<TransferState>)> {
        self.check_loads(loads)?;
        let n = self.count();
        let mut fields = Vec::with_capacity(n - 1);
        let mut transfers = Vec::new();
        let mut current = loads[n - 1].restrict(&self.sub(n - 1).grid)?;
        for i in (2..=n).rev() {
            let s = i - 1;
            let grid = &self.sub(s).grid;
            let mut rhs = current.clone();
            if i == 2 {
                rhs.axpy(Complex64::new(1.0, 0.0), &loads[0].restrict(grid)?);
            }
            let u = solver.solve_pair(s, &rhs).map_err(|e| tag("subproblem", s, e))?;
            if i > 2 {
                // The previous piece's own source joins after the transfer.
                let zero = ComplexField::zeros(grid);
                let mut t = self.transfer(s, &u, &current, &zero, i - 1, Orientation::Minus, s - 1)?;
                t.load.add_overlap(&loads[i - 2])?;
                current = t.load.clone();
                transfers.push(t);
            }
            fields.push(u);
        }
        fields.reverse();
        Ok((fields, transfers))
    }

    /// Both sweeps, run concurrently.
    pub fn sweep(&self, solver: &dyn PairSolver, loads: &[ComplexField]) -> Result<SweepFields> {
        let (plus, minus) = std::thread::scope(|scope| {
            let down = scope.spawn(|| self.sweep_minus(solver, loads));
            let up = self.sweep_plus(solver, loads);
            (up, down.join().expect("minus sweep panicked"))
        });
        let (plus, mut transfers) = plus?;
        let (minus, t2) = minus?;
        transfers.extend(t2);
        Ok(SweepFields { plus, minus, transfers })
    }

    /// `sign * (u_{i-1}^+ + u_{i+1}^-)` on each piece `i`, on the parent grid.
    pub fn combine(&self, fields: &SweepFields, sign: f64) -> Result<ComplexField> {
        let n = self.count();
        if fields.plus.len() != n - 1 || fields.minus.len() != n - 1 {
            return Err(Error::Dimension {
                expected: n - 1,
                got: fields.plus.len().min(fields.minus.len()),
            });
        }
        let g = &self.parent;
        let mut out = ComplexField::zeros(g);
        let offsets: Vec<[usize; 2]> = self.subs.iter().map(|s| g.offset_of(&s.grid)).collect::<Result<_>>()?;
        for j in 0..g.ny() {
            for i in 0..g.nx() {
                let p = self.owner(g.point(i, j)[self.axis.index()]);
                let mut v = Complex64::new(0.0, 0.0);
                if p >= 2 {
                    // u_{p-1}^+ on subproblem p - 1.
                    v += local(&fields.plus[p - 2], offsets[p - 2], i, j);
                }
                if p < n {
                    // u_{p+1}^- on subproblem p.
                    v += local(&fields.minus[p - 1], offsets[p - 1], i, j);
                }
                out.values[g.node_id(i, j)] = sign * v;
            }
        }
        Ok(out)
    }
}

fn local(f: &ComplexField, off: [usize; 2], i: usize, j: usize) -> Complex64 {
    let (li, lj) = (i as i64 - off[0] as i64, j as i64 - off[1] as i64);
    if li < 0 || lj < 0 || li as usize >= f.grid.nx() || lj as usize >= f.grid.ny() {
        Complex64::new(0.0, 0.0)
    } else {
        f.at(li as usize, lj as usize)
    }
}
