//! Grids for the benchmark geometry, aligned with every interface a run needs.

use crate::error::Result;
use crate::fem::StructuredGrid;
use crate::geometry::{Axis, AxisPartition};
use crate::pml::PmlProfile;

/// Coordinates along `axis` that must be grid lines: the unstretched box
/// edges, and for every requested split the interfaces and the edges of the
/// local subproblems (interfaces shifted by `margin`).
pub fn snap_points(profile: &PmlProfile, axis: Axis, counts: &[usize], margin: f64) -> Result<Vec<f64>> {
    let l = profile.l[axis.index()];
    let mut pts = vec![-l, l];
    for &n in counts {
        if n < 2 {
            continue;
        }
        let p = AxisPartition::new(l, n)?;
        for &z in p.interfaces() {
            pts.extend([z, z - margin, z + margin]);
        }
    }
    Ok(pts)
}

/// Grid on the outer PML box with about `q` nodes per wavelength along each
/// axis, aligned for the given layer counts (x2) and block counts (x1).
pub fn benchmark_grid(profile: &PmlProfile, k: f64, q: f64, layer_counts: &[usize], block_counts: &[usize]) -> Result<StructuredGrid> {
    let x1 = snap_points(profile, Axis::X1, block_counts, profile.d[0])?;
    let x2 = snap_points(profile, Axis::X2, layer_counts, profile.d[1])?;
    StructuredGrid::build(profile.outer_box(), k, q, [&x1, &x2])
}
