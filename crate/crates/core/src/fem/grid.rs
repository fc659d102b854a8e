use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Axis, Rect};

/// Relative tolerance (in units of h) for a coordinate to count as a grid line.
pub const ALIGN_TOL: f64 = 1e-9;

/// A grid may not be refined beyond this factor of the requested resolution
/// to make snap points land on grid lines.
const MAX_REFINEMENT: usize = 4;

/// Uniform lattice shared by a grid and all of its subgrids, so that a node
/// has bitwise identical coordinates in every grid containing it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice {
    pub origin: [f64; 2],
    pub h: [f64; 2],
}

impl Lattice {
    pub fn coord(&self, axis: Axis, index: i64) -> f64 {
        let j = axis.index();
        self.origin[j] + index as f64 * self.h[j]
    }

    /// Lattice index of `t` if it lies on a grid line.
    pub fn index_of(&self, axis: Axis, t: f64) -> Option<i64> {
        let j = axis.index();
        let s = (t - self.origin[j]) / self.h[j];
        let r = s.round();
        ((s - r).abs() <= ALIGN_TOL).then_some(r as i64)
    }
}

/// Rectangle of lattice nodes `[start, start + n)` per axis. Node storage is
/// x1-fastest: `id = iy * nx + ix` with local indices.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuredGrid {
    lattice: Lattice,
    start: [i64; 2],
    n: [usize; 2],
}

impl StructuredGrid {
    pub fn from_lattice(lattice: Lattice, start: [i64; 2], n: [usize; 2]) -> Result<Self> {
        if n[0] < 2 || n[1] < 2 {
            return Err(Error::Grid(format!("grid needs at least 2 nodes per axis, got {n:?}")));
        }
        Ok(StructuredGrid { lattice, start, n })
    }

    /// Uniform grid on `rect` with spacing at most `lambda / q`, refined until
    /// every snap point lies on a grid line.
    pub fn build(rect: Rect, k: f64, q: f64, snap: [&[f64]; 2]) -> Result<Self> {
        if !(q >= 4.0) {
            return Err(Error::Config(format!("mesh density q must be at least 4, got {q}")));
        }
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::Config(format!("wave number must be positive, got {k}")));
        }
        if rect.is_degenerate() {
            return Err(Error::Config(format!("degenerate rectangle {rect:?}")));
        }
        let h_req = 2.0 * std::f64::consts::PI / k / q;
        let mut counts = [0usize; 2];
        for axis in [Axis::X1, Axis::X2] {
            let (a, b) = rect.range(axis);
            counts[axis.index()] = aligned_count(a, b, h_req, snap[axis.index()])?;
        }
        let lattice = Lattice {
            origin: [rect.x.0, rect.y.0],
            h: [
                (rect.x.1 - rect.x.0) / counts[0] as f64,
                (rect.y.1 - rect.y.0) / counts[1] as f64,
            ],
        };
        StructuredGrid::from_lattice(lattice, [0, 0], [counts[0] + 1, counts[1] + 1])
    }

    /// The grid with every spacing halved (nested refinement).
    pub fn refined(&self) -> StructuredGrid {
        let lattice = Lattice {
            origin: [self.x_range().0, self.y_range().0],
            h: [0.5 * self.lattice.h[0], 0.5 * self.lattice.h[1]],
        };
        StructuredGrid {
            lattice,
            start: [0, 0],
            n: [2 * self.n[0] - 1, 2 * self.n[1] - 1],
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn nx(&self) -> usize {
        self.n[0]
    }

    pub fn ny(&self) -> usize {
        self.n[1]
    }

    pub fn n(&self, axis: Axis) -> usize {
        self.n[axis.index()]
    }

    pub fn h(&self, axis: Axis) -> f64 {
        self.lattice.h[axis.index()]
    }

    pub fn hx(&self) -> f64 {
        self.lattice.h[0]
    }

    pub fn hy(&self) -> f64 {
        self.lattice.h[1]
    }

    pub fn start(&self, axis: Axis) -> i64 {
        self.start[axis.index()]
    }

    pub fn node_count(&self) -> usize {
        self.n[0] * self.n[1]
    }

    /// Coordinate of local node index `i` along `axis`.
    pub fn coord(&self, axis: Axis, i: usize) -> f64 {
        self.lattice.coord(axis, self.start[axis.index()] + i as i64)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.coord(Axis::X1, i)
    }

    pub fn y(&self, j: usize) -> f64 {
        self.coord(Axis::X2, j)
    }

    pub fn point(&self, i: usize, j: usize) -> [f64; 2] {
        [self.x(i), self.y(j)]
    }

    pub fn node_id(&self, i: usize, j: usize) -> usize {
        j * self.n[0] + i
    }

    pub fn node_ij(&self, id: usize) -> (usize, usize) {
        (id % self.n[0], id / self.n[0])
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.x(0), self.x(self.n[0] - 1))
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.y(0), self.y(self.n[1] - 1))
    }

    pub fn rect(&self) -> Rect {
        Rect::new(self.x_range(), self.y_range())
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i + 1 == self.n[0] || j + 1 == self.n[1]
    }

    /// Local node index of coordinate `t` if it lies on a grid line inside the grid.
    pub fn local_index(&self, axis: Axis, t: f64) -> Option<usize> {
        let g = self.lattice.index_of(axis, t)?;
        let l = g - self.start[axis.index()];
        (l >= 0 && (l as usize) < self.n[axis.index()]).then_some(l as usize)
    }

    pub fn is_aligned(&self, axis: Axis, t: f64) -> bool {
        self.lattice.index_of(axis, t).is_some()
    }

    pub fn require_aligned(&self, axis: Axis, t: f64, what: &str) -> Result<()> {
        if self.is_aligned(axis, t) {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "{what} at {t} is not on a grid line along {axis:?} (h = {})",
                self.h(axis)
            )))
        }
    }

    /// Local index range `[lo, hi]` of nodes inside the closed interval `[a, b]`.
    pub fn index_span(&self, axis: Axis, a: f64, b: f64) -> Option<(usize, usize)> {
        let j = axis.index();
        let h = self.lattice.h[j];
        let s0 = ((a - self.lattice.origin[j]) / h - ALIGN_TOL).ceil() as i64 - self.start[j];
        let s1 = ((b - self.lattice.origin[j]) / h + ALIGN_TOL).floor() as i64 - self.start[j];
        let lo = s0.max(0);
        let hi = s1.min(self.n[j] as i64 - 1);
        (lo <= hi).then_some((lo as usize, hi as usize))
    }

    /// Subgrid covering `rect` (clipped to this grid); its edges must lie on
    /// grid lines.
    pub fn subgrid(&self, rect: Rect) -> Result<StructuredGrid> {
        let clipped = rect.intersect(&self.rect());
        let mut start = [0i64; 2];
        let mut n = [0usize; 2];
        for axis in [Axis::X1, Axis::X2] {
            let (a, b) = clipped.range(axis);
            let ia = self
                .local_index(axis, a)
                .ok_or_else(|| Error::Grid(format!("subgrid edge {a} not on a grid line along {axis:?}")))?;
            let ib = self
                .local_index(axis, b)
                .ok_or_else(|| Error::Grid(format!("subgrid edge {b} not on a grid line along {axis:?}")))?;
            if ib < ia + 1 {
                return Err(Error::Grid(format!("subgrid {rect:?} is degenerate")));
            }
            start[axis.index()] = self.start[axis.index()] + ia as i64;
            n[axis.index()] = ib - ia + 1;
        }
        StructuredGrid::from_lattice(self.lattice, start, n)
    }

    /// Offset of `sub`'s local indices inside this grid, if nested.
    pub fn offset_of(&self, sub: &StructuredGrid) -> Result<[usize; 2]> {
        if sub.lattice != self.lattice {
            return Err(Error::Grid("grids do not share a lattice".into()));
        }
        let mut off = [0usize; 2];
        for j in 0..2 {
            let o = sub.start[j] - self.start[j];
            if o < 0 || o as usize + sub.n[j] > self.n[j] {
                return Err(Error::Grid("grid is not contained in the other".into()));
            }
            off[j] = o as usize;
        }
        Ok(off)
    }
}

/// Smallest interval count `>= (b - a) / h_req` that puts every snap point in
/// `[a, b]` on a grid line.
fn aligned_count(a: f64, b: f64, h_req: f64, snap: &[f64]) -> Result<usize> {
    let extent = b - a;
    let base = ((extent / h_req) - 1e-9).ceil().max(1.0) as usize;
    'count: for n in base..=MAX_REFINEMENT * base {
        for &s in snap {
            if s < a - 1e-12 || s > b + 1e-12 {
                continue;
            }
            let t = (s - a) / extent * n as f64;
            if (t - t.round()).abs() > ALIGN_TOL {
                continue 'count;
            }
        }
        return Ok(n);
    }
    Err(Error::Config(format!(
        "snap points {snap:?} cannot be aligned on [{a}, {b}] within {MAX_REFINEMENT}x the requested spacing {h_req}"
    )))
}

/// Nodal complex values on a grid. Also used for load vectors, where entry
/// `a` is the value of the functional on the hat function of node `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField {
    pub grid: StructuredGrid,
    pub values: Vec<Complex64>,
}

impl ComplexField {
    pub fn zeros(grid: &StructuredGrid) -> Self {
        ComplexField {
            grid: grid.clone(),
            values: vec![Complex64::new(0.0, 0.0); grid.node_count()],
        }
    }

    pub fn from_fn(grid: &StructuredGrid, f: impl Fn([f64; 2]) -> Complex64) -> Self {
        let mut u = ComplexField::zeros(grid);
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                u.values[grid.node_id(i, j)] = f(grid.point(i, j));
            }
        }
        u
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.grid.node_id(i, j)]
    }

    pub fn axpy(&mut self, a: Complex64, x: &ComplexField) {
        assert_eq!(self.grid, x.grid, "axpy on different grids");
        for (y, v) in self.values.iter_mut().zip(&x.values) {
            *y += a * v;
        }
    }

    pub fn scale(&mut self, a: Complex64) {
        for v in &mut self.values {
            *v *= a;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Values on the nodes of `sub` (a subgrid of this field's grid).
    pub fn restrict(&self, sub: &StructuredGrid) -> Result<ComplexField> {
        let off = self.grid.offset_of(sub)?;
        let mut out = ComplexField::zeros(sub);
        for j in 0..sub.ny() {
            let src = self.grid.node_id(off[0], off[1] + j);
            let dst = sub.node_id(0, j);
            out.values[dst..dst + sub.nx()].copy_from_slice(&self.values[src..src + sub.nx()]);
        }
        Ok(out)
    }

    /// This field placed in `sup` (which contains this field's grid), zero elsewhere.
    pub fn extend_by_zero(&self, sup: &StructuredGrid) -> Result<ComplexField> {
        let mut out = ComplexField::zeros(sup);
        out.add_from(self)?;
        Ok(out)
    }

    /// Adds `other` (on a subgrid of this field's grid) into the matching nodes.
    pub fn add_from(&mut self, other: &ComplexField) -> Result<()> {
        let off = self.grid.offset_of(&other.grid)?;
        for j in 0..other.grid.ny() {
            for i in 0..other.grid.nx() {
                self.values[self.grid.node_id(off[0] + i, off[1] + j)] += other.at(i, j);
            }
        }
        Ok(())
    }

    /// Adds the entries of `other` that lie on nodes of this field's grid;
    /// the two grids only need to share a lattice.
    pub fn add_overlap(&mut self, other: &ComplexField) -> Result<()> {
        if self.grid.lattice != other.grid.lattice {
            return Err(Error::Grid("grids do not share a lattice".into()));
        }
        for j in 0..other.grid.ny() {
            let gj = other.grid.start[1] + j as i64 - self.grid.start[1];
            if gj < 0 || gj as usize >= self.grid.ny() {
                continue;
            }
            for i in 0..other.grid.nx() {
                let gi = other.grid.start[0] + i as i64 - self.grid.start[0];
                if gi < 0 || gi as usize >= self.grid.nx() {
                    continue;
                }
                self.values[self.grid.node_id(gi as usize, gj as usize)] += other.at(i, j);
            }
        }
        Ok(())
    }

    /// Zeroes the Dirichlet boundary nodes.
    pub fn clear_boundary(&mut self) {
        let g = &self.grid;
        for j in 0..g.ny() {
            for i in 0..g.nx() {
                if g.is_boundary(i, j) {
                    self.values[g.node_id(i, j)] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }
}

/// Numbering of the interior (non-Dirichlet) nodes, with the shorter axis
/// running fastest so that the matrix bandwidth is minimal.
#[derive(Clone, Debug, PartialEq)]
pub struct DofMap {
    n: [usize; 2],
    x_fast: bool,
}

impl DofMap {
    pub fn new(grid: &StructuredGrid) -> Self {
        DofMap {
            n: [grid.nx(), grid.ny()],
            x_fast: grid.nx() <= grid.ny(),
        }
    }

    pub fn len(&self) -> usize {
        (self.n[0] - 2) * (self.n[1] - 2)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Interior nodes along the fast axis (the half bandwidth of the matrix is one more).
    pub fn fast_count(&self) -> usize {
        if self.x_fast {
            self.n[0] - 2
        } else {
            self.n[1] - 2
        }
    }

    pub fn dof(&self, i: usize, j: usize) -> Option<usize> {
        if i == 0 || j == 0 || i + 1 >= self.n[0] || j + 1 >= self.n[1] {
            return None;
        }
        let (a, b) = (i - 1, j - 1);
        Some(if self.x_fast {
            b * (self.n[0] - 2) + a
        } else {
            a * (self.n[1] - 2) + b
        })
    }

    pub fn node(&self, dof: usize) -> (usize, usize) {
        if self.x_fast {
            let w = self.n[0] - 2;
            (dof % w + 1, dof / w + 1)
        } else {
            let w = self.n[1] - 2;
            (dof / w + 1, dof % w + 1)
        }
    }

    pub fn gather(&self, field: &ComplexField) -> Vec<Complex64> {
        let g = &field.grid;
        (0..self.len())
            .map(|d| {
                let (i, j) = self.node(d);
                field.values[g.node_id(i, j)]
            })
            .collect()
    }

    pub fn scatter(&self, grid: &StructuredGrid, x: &[Complex64]) -> ComplexField {
        let mut f = ComplexField::zeros(grid);
        for (d, v) in x.iter().enumerate() {
            let (i, j) = self.node(d);
            f.values[grid.node_id(i, j)] = *v;
        }
        f
    }
}
