//! Direct solves of the global truncated problem.

use num_complex::Complex64;

use crate::error::Result;
use crate::fem::{assemble_volume_load, ComplexField, StructuredGrid, Subproblem};
use crate::pml::{PmlProfile, StretchSelector};

/// The global PML system on the whole grid.
pub fn global_subproblem(grid: &StructuredGrid, profile: &PmlProfile, k: f64) -> Result<Subproblem> {
    Subproblem::assemble(grid, StretchSelector::global(profile), profile, k)
}

/// Right-hand side `-<J f, phi>` of the global system.
pub fn global_load(grid: &StructuredGrid, profile: &PmlProfile, f: &dyn Fn([f64; 2]) -> Complex64) -> ComplexField {
    assemble_volume_load(grid, &StretchSelector::global(profile), profile, f, None)
}

/// FE solution of `Laplacian(u) + k^2 u = f` with the global PML and zero
/// Dirichlet data on the grid boundary.
pub fn solve_fe(grid: &StructuredGrid, profile: &PmlProfile, k: f64, f: &dyn Fn([f64; 2]) -> Complex64) -> Result<ComplexField> {
    let sub = global_subproblem(grid, profile, k)?;
    let lu = sub.factorize()?;
    sub.solve_with(&lu, &global_load(grid, profile, f))
}
