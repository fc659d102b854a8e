#![allow(dead_code)]

pub mod bessel;

use pstddm::fem::{ComplexField, StructuredGrid};

/// Nodal values of a field on the once-refined grid at the nodes of `coarse`.
pub fn inject(fine: &ComplexField, coarse: &StructuredGrid) -> ComplexField {
    let mut out = ComplexField::zeros(coarse);
    for j in 0..coarse.ny() {
        for i in 0..coarse.nx() {
            out.values[coarse.node_id(i, j)] = fine.at(2 * i, 2 * j);
        }
    }
    out
}
