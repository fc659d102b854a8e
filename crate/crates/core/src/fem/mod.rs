//! Structured-grid Q1 finite elements for the PML-stretched Helmholtz operator.

pub mod assembly;
pub mod cutoff;
pub mod grid;
pub mod norms;
pub mod quadrature;
pub mod transfer;

pub use assembly::{assemble_matrix, assemble_volume_load, Subproblem};
pub use cutoff::{beta_eval, CutoffSpec, Orientation};
pub use grid::{ComplexField, DofMap, Lattice, StructuredGrid};
pub use norms::{exact_h1_seminorm, h1_seminorm, h1_seminorm_error, relative_h1_difference};
pub use transfer::{assemble_transfer_load, locality_defect, TransferRule};
