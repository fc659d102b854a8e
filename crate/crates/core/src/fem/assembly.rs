//! Q1 assembly of `(A grad u, grad v) - k^2 (J u, v)` with homogeneous
//! Dirichlet conditions, and of volume loads.

use num_complex::Complex64;

use super::grid::{ComplexField, DofMap, StructuredGrid};
use super::quadrature::{GAUSS2, GAUSS2_W};
use crate::error::{Error, Result};
use crate::geometry::{Axis, Rect};
use crate::pml::{PmlProfile, StretchCoefficients, StretchSelector};
use crate::sparse::{factorize, CsrMatrix, Factorization};

/// Local node order within an element: (i,j), (i+1,j), (i,j+1), (i+1,j+1).
pub(crate) const CORNERS: [(usize, usize); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

/// Bilinear shape functions and their reference derivatives at `(s, t)`.
pub(crate) fn shape(s: f64, t: f64) -> ([f64; 4], [f64; 4], [f64; 4]) {
    (
        [(1.0 - s) * (1.0 - t), s * (1.0 - t), (1.0 - s) * t, s * t],
        [-(1.0 - t), 1.0 - t, -t, t],
        [-(1.0 - s), -s, 1.0 - s, s],
    )
}

/// The matrix of one subproblem with the grid and stretching it was built from.
#[derive(Clone, Debug)]
pub struct Subproblem {
    pub grid: StructuredGrid,
    pub dofs: DofMap,
    pub selector: StretchSelector,
    pub k: f64,
    pub matrix: CsrMatrix,
}

impl Subproblem {
    pub fn assemble(grid: &StructuredGrid, selector: StretchSelector, profile: &PmlProfile, k: f64) -> Result<Self> {
        let matrix = assemble_matrix(grid, &selector, profile, k)?;
        Ok(Subproblem {
            grid: grid.clone(),
            dofs: DofMap::new(grid),
            selector,
            k,
            matrix,
        })
    }

    pub fn factorize(&self) -> Result<Factorization> {
        factorize(&self.matrix)
    }

    /// Solves with a load field given on this subproblem's grid.
    pub fn solve_with(&self, lu: &Factorization, load: &ComplexField) -> Result<ComplexField> {
        let rhs = self.dofs.gather(load);
        let x = lu.solve(&rhs)?;
        Ok(self.dofs.scatter(&self.grid, &x))
    }
}

fn check_alignment(grid: &StructuredGrid, selector: &StretchSelector) -> Result<()> {
    for axis in [Axis::X1, Axis::X2] {
        let w = selector.window(axis);
        let (a, b) = if axis == Axis::X1 { grid.x_range() } else { grid.y_range() };
        for t in [w.lo, w.hi] {
            if t > a && t < b {
                grid.require_aligned(axis, t, "stretching interface")?;
            }
        }
    }
    Ok(())
}

/// 9-point sparsity pattern over the interior nodes.
pub(crate) fn pattern(grid: &StructuredGrid, dofs: &DofMap) -> Result<CsrMatrix> {
    let mut rows = Vec::with_capacity(dofs.len());
    for d in 0..dofs.len() {
        let (i, j) = dofs.node(d);
        let mut cols = Vec::with_capacity(9);
        for dj in -1i64..=1 {
            for di in -1i64..=1 {
                let (ii, jj) = ((i as i64 + di) as usize, (j as i64 + dj) as usize);
                if let Some(c) = dofs.dof(ii, jj) {
                    cols.push(c);
                }
            }
        }
        cols.sort_unstable();
        rows.push(cols);
    }
    let _ = grid;
    CsrMatrix::from_pattern(dofs.len(), rows)
}

/// Stretching factors at the two Gauss abscissae of every element column/row.
pub(crate) fn gauss_alphas(
    grid: &StructuredGrid,
    selector: &StretchSelector,
    profile: &PmlProfile,
    axis: Axis,
    nodes: &[f64],
) -> Vec<Vec<Complex64>> {
    let n = grid.n(axis);
    let h = grid.h(axis);
    (0..n - 1)
        .map(|e| {
            let x0 = grid.coord(axis, e);
            nodes.iter().map(|s| selector.alpha(profile, axis, x0 + s * h)).collect()
        })
        .collect()
}

pub fn assemble_matrix(
    grid: &StructuredGrid,
    selector: &StretchSelector,
    profile: &PmlProfile,
    k: f64,
) -> Result<CsrMatrix> {
    if !k.is_finite() || k < 0.0 {
        return Err(Error::Config(format!("invalid wave number {k}")));
    }
    check_alignment(grid, selector)?;
    let dofs = DofMap::new(grid);
    let mut m = pattern(grid, &dofs)?;
    let (hx, hy) = (grid.hx(), grid.hy());
    let a1 = gauss_alphas(grid, selector, profile, Axis::X1, &GAUSS2);
    let a2 = gauss_alphas(grid, selector, profile, Axis::X2, &GAUSS2);
    let shapes: Vec<_> = GAUSS2
        .iter()
        .flat_map(|&t| GAUSS2.iter().map(move |&s| shape(s, t)))
        .collect();
    let k2 = k * k;
    let w = GAUSS2_W * GAUSS2_W * hx * hy;
    for ey in 0..grid.ny() - 1 {
        for ex in 0..grid.nx() - 1 {
            let mut ke = [[Complex64::new(0.0, 0.0); 4]; 4];
            for (q, (phi, ds, dt)) in shapes.iter().enumerate() {
                let (qs, qt) = (q % 2, q / 2);
                let c = StretchCoefficients::from_alphas(a1[ex][qs], a2[ey][qt]);
                for a in 0..4 {
                    for b in a..4 {
                        let dxx = ds[a] * ds[b] / (hx * hx);
                        let dyy = dt[a] * dt[b] / (hy * hy);
                        ke[a][b] += w * (c.a11 * dxx + c.a22 * dyy - k2 * c.jac * (phi[a] * phi[b]));
                    }
                }
            }
            let ids: Vec<Option<usize>> = CORNERS.iter().map(|&(ci, cj)| dofs.dof(ex + ci, ey + cj)).collect();
            for a in 0..4 {
                let Some(ra) = ids[a] else { continue };
                for b in 0..4 {
                    let Some(cb) = ids[b] else { continue };
                    let v = if a <= b { ke[a][b] } else { ke[b][a] };
                    *m.entry_mut(ra, cb).expect("9-point pattern") += v;
                }
            }
        }
    }
    Ok(m)
}

/// `-<J f, phi_a>` for every node `a`, integrating over the elements whose
/// centre lies in `support` (all elements when `None`). Entries on the grid
/// boundary are kept; solvers ignore them.
pub fn assemble_volume_load(
    grid: &StructuredGrid,
    selector: &StretchSelector,
    profile: &PmlProfile,
    f: &dyn Fn([f64; 2]) -> Complex64,
    support: Option<Rect>,
) -> ComplexField {
    let mut load = ComplexField::zeros(grid);
    let (hx, hy) = (grid.hx(), grid.hy());
    let w = GAUSS2_W * GAUSS2_W * hx * hy;
    let a1 = gauss_alphas(grid, selector, profile, Axis::X1, &GAUSS2);
    let a2 = gauss_alphas(grid, selector, profile, Axis::X2, &GAUSS2);
    for ey in 0..grid.ny() - 1 {
        for ex in 0..grid.nx() - 1 {
            let centre = [grid.x(ex) + 0.5 * hx, grid.y(ey) + 0.5 * hy];
            if let Some(s) = support {
                if !s.contains(centre, 0.0) {
                    continue;
                }
            }
            let mut le = [Complex64::new(0.0, 0.0); 4];
            for (qt, &t) in GAUSS2.iter().enumerate() {
                for (qs, &s) in GAUSS2.iter().enumerate() {
                    let p = [grid.x(ex) + s * hx, grid.y(ey) + t * hy];
                    let fv = f(p);
                    if fv == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let jac = a1[ex][qs] * a2[ey][qt];
                    let (phi, _, _) = shape(s, t);
                    for a in 0..4 {
                        le[a] -= w * jac * fv * phi[a];
                    }
                }
            }
            for (a, &(ci, cj)) in CORNERS.iter().enumerate() {
                load.values[grid.node_id(ex + ci, ey + cj)] += le[a];
            }
        }
    }
    load
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::grid::Lattice;

    fn unit_grid(n: usize) -> StructuredGrid {
        let h = 1.0 / (n - 1) as f64;
        StructuredGrid::from_lattice(
            Lattice {
                origin: [0.0, 0.0],
                h: [h, h],
            },
            [0, 0],
            [n, n],
        )
        .unwrap()
    }

    /// A profile whose PML lies entirely outside the unit square.
    fn far_profile() -> PmlProfile {
        PmlProfile::new([5.0, 5.0], [5.5, 5.5], [1.0, 1.0], 1.0).unwrap()
    }

    #[test]
    fn laplacian_rows_sum_to_zero_away_from_boundary() {
        let g = unit_grid(7);
        let p = far_profile();
        let m = assemble_matrix(&g, &StretchSelector::global(&p), &p, 0.0).unwrap();
        let dofs = DofMap::new(&g);
        let d = dofs.dof(3, 3).unwrap();
        let (_, vals) = m.row(d);
        let s: Complex64 = vals.iter().sum();
        assert!(s.norm() < 1e-14);
        // Square Q1 Laplacian stencil: 8/3 centre, -1/3 neighbours.
        assert!((m.get(d, d) - Complex64::new(8.0 / 3.0, 0.0)).norm() < 1e-14);
        assert!((m.get(d, dofs.dof(4, 4).unwrap()) - Complex64::new(-1.0 / 3.0, 0.0)).norm() < 1e-14);
        assert!((m.get(d, dofs.dof(4, 3).unwrap()) - Complex64::new(-1.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn single_element_matrix_by_hand() {
        // One interior node at the centre of a 3x3 node grid; its row holds
        // the assembled contributions of the four elements. With h = 1/2,
        // stiffness diagonal is 8/3 and mass diagonal is 4 * h^2 / 9.
        let g = unit_grid(3);
        let p = far_profile();
        let m = assemble_matrix(&g, &StretchSelector::global(&p), &p, 1.0).unwrap();
        let h2 = 0.25;
        let expected = 8.0 / 3.0 - 4.0 * h2 / 9.0;
        assert!((m.get(0, 0) - Complex64::new(expected, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn unit_source_on_one_element() {
        let g = unit_grid(5);
        let p = far_profile();
        let h = g.hx();
        let f = |x: [f64; 2]| {
            if x[0] > 0.25 && x[0] < 0.5 && x[1] > 0.25 && x[1] < 0.5 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let load = assemble_volume_load(&g, &StretchSelector::global(&p), &p, &f, None);
        for (i, j) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            assert!((load.at(i, j) - Complex64::new(-h * h / 4.0, 0.0)).norm() < 1e-15);
        }
        assert_eq!(load.at(3, 3), Complex64::new(0.0, 0.0));
        let outside = Rect::new((2.0, 3.0), (2.0, 3.0));
        let z = assemble_volume_load(&g, &StretchSelector::global(&p), &p, &f, Some(outside));
        assert_eq!(z.max_abs(), 0.0);
    }
}
