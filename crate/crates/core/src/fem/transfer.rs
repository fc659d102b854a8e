//! Load vectors of transferred sources.
//!
//! A subproblem solve `M u = cur + next` followed by the cutoff `beta` gives
//! the source seen by the following subproblem through the three-term weak
//! identity
//!
//! `<Psi, psi> = -(A u grad beta, grad psi) + (A grad u, psi grad beta) - <next, beta psi>`
//!
//! (plus `<cur, (1 - beta) psi>`, which vanishes when `cur` lives where
//! `beta = 1`). Two discretizations are provided:
//!
//! * [`TransferRule::Nodal`] uses the nodal values of `beta` and the full
//!   subproblem matrix: `Psi_a = sum_b M_ab (beta_a - beta_b) u_b - beta_a next_a
//!   + (1 - beta_a) cur_a`. This equals `cur - M (beta u)` exactly, so the
//!   transferred source reproduces the discrete field beyond the cutoff.
//! * [`TransferRule::Quadrature`] integrates the first two terms with the
//!   analytic `beta` and `beta'` at 3x3 Gauss points.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::assembly::{gauss_alphas, shape, Subproblem, CORNERS};
use super::cutoff::CutoffSpec;
use super::grid::ComplexField;
use super::quadrature::{GAUSS3, GAUSS3_W};
use crate::error::{Error, Result};
use crate::geometry::{Axis, Rect};
use crate::pml::{PmlProfile, StretchCoefficients};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransferRule {
    #[default]
    Nodal,
    Quadrature,
}

/// Load of the source transferred out of `sub` after solving for `u_prev`
/// with right-hand side `current + next`. All fields live on `sub.grid`.
pub fn assemble_transfer_load(
    sub: &Subproblem,
    profile: &PmlProfile,
    u_prev: &ComplexField,
    cutoff: &CutoffSpec,
    current: &ComplexField,
    next: &ComplexField,
    rule: TransferRule,
) -> Result<ComplexField> {
    let grid = &sub.grid;
    for f in [u_prev, current, next] {
        if f.grid != *grid {
            return Err(Error::Grid("transfer inputs must live on the subproblem grid".into()));
        }
    }
    let (a, b) = cutoff.band();
    let (lo, hi) = grid.rect().range(cutoff.axis);
    if a < lo || b > hi {
        return Err(Error::Grid(format!(
            "cutoff band ({a}, {b}) is not covered by the grid range ({lo}, {hi})"
        )));
    }
    let beta_at = |i: usize, j: usize| cutoff.value(grid.point(i, j)[cutoff.axis.index()]);
    let mut out = ComplexField::zeros(grid);
    let dofs = &sub.dofs;
    for d in 0..dofs.len() {
        let (i, j) = dofs.node(d);
        let id = grid.node_id(i, j);
        let beta = beta_at(i, j);
        out.values[id] = (1.0 - beta) * current.values[id] - beta * next.values[id];
    }
    match rule {
        TransferRule::Nodal => {
            for d in 0..dofs.len() {
                let (i, j) = dofs.node(d);
                let ba = beta_at(i, j);
                let (cols, vals) = sub.matrix.row(d);
                let mut s = Complex64::new(0.0, 0.0);
                for (&c, &m) in cols.iter().zip(vals) {
                    let (ci, cj) = dofs.node(c);
                    let diff = ba - beta_at(ci, cj);
                    if diff != 0.0 {
                        s += m * (diff * u_prev.values[grid.node_id(ci, cj)]);
                    }
                }
                out.values[grid.node_id(i, j)] += s;
            }
        }
        TransferRule::Quadrature => {
            add_commutator_quadrature(sub, profile, u_prev, cutoff, &mut out);
        }
    }
    Ok(out)
}

/// Adds `-(A u grad beta, grad phi_a) + (A grad u, phi_a grad beta)` for all
/// interior nodes `a`, by 3x3 Gauss quadrature over elements meeting the band.
fn add_commutator_quadrature(
    sub: &Subproblem,
    profile: &PmlProfile,
    u: &ComplexField,
    cutoff: &CutoffSpec,
    out: &mut ComplexField,
) {
    let grid = &sub.grid;
    let (hx, hy) = (grid.hx(), grid.hy());
    let a1 = gauss_alphas(grid, &sub.selector, profile, Axis::X1, &GAUSS3);
    let a2 = gauss_alphas(grid, &sub.selector, profile, Axis::X2, &GAUSS3);
    let (band_lo, band_hi) = cutoff.band();
    let axis = cutoff.axis.index();
    for ey in 0..grid.ny() - 1 {
        for ex in 0..grid.nx() - 1 {
            let e0 = grid.point(ex, ey);
            let h = [hx, hy];
            if e0[axis] + h[axis] <= band_lo || e0[axis] >= band_hi {
                continue;
            }
            let ue: Vec<Complex64> = CORNERS.iter().map(|&(ci, cj)| u.at(ex + ci, ey + cj)).collect();
            let mut le = [Complex64::new(0.0, 0.0); 4];
            for (qt, &t) in GAUSS3.iter().enumerate() {
                for (qs, &s) in GAUSS3.iter().enumerate() {
                    let w = GAUSS3_W[qs] * GAUSS3_W[qt] * hx * hy;
                    let p = [e0[0] + s * hx, e0[1] + t * hy];
                    let (_, dbeta) = cutoff.eval(p[axis]);
                    if dbeta == 0.0 {
                        continue;
                    }
                    let c = StretchCoefficients::from_alphas(a1[ex][qs], a2[ey][qt]);
                    let diag = [c.a11, c.a22];
                    let (phi, ds, dt) = shape(s, t);
                    let mut uq = Complex64::new(0.0, 0.0);
                    let mut grad = [Complex64::new(0.0, 0.0); 2];
                    for n in 0..4 {
                        uq += ue[n] * phi[n];
                        grad[0] += ue[n] * (ds[n] / hx);
                        grad[1] += ue[n] * (dt[n] / hy);
                    }
                    for n in 0..4 {
                        let dphi = [ds[n] / hx, dt[n] / hy];
                        let v = -(diag[axis] * uq * dbeta * dphi[axis]) + diag[axis] * grad[axis] * (dbeta * phi[n]);
                        le[n] += w * v;
                    }
                }
            }
            for (n, &(ci, cj)) in CORNERS.iter().enumerate() {
                let (i, j) = (ex + ci, ey + cj);
                if !grid.is_boundary(i, j) {
                    out.values[grid.node_id(i, j)] += le[n];
                }
            }
        }
    }
}

/// Largest entry of `load` at nodes outside `target`, relative to its largest entry.
pub fn locality_defect(load: &ComplexField, target: Rect) -> f64 {
    let g = &load.grid;
    let scale = load.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    let tol = 1e-9 * g.hx().min(g.hy());
    let mut worst = 0.0f64;
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            if !target.contains(g.point(i, j), tol) {
                worst = worst.max(load.at(i, j).norm());
            }
        }
    }
    worst / scale
}
