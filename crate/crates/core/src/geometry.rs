//! Rectangles and uniform interface partitions along one axis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X1,
    X2,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
        }
    }

    pub fn other(self) -> Axis {
        match self {
            Axis::X1 => Axis::X2,
            Axis::X2 => Axis::X1,
        }
    }
}

/// Axis-aligned closed rectangle `[x.0, x.1] x [y.0, y.1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Rect {
    pub fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        Rect { x, y }
    }

    pub fn range(&self, axis: Axis) -> (f64, f64) {
        match axis {
            Axis::X1 => self.x,
            Axis::X2 => self.y,
        }
    }

    pub fn with_range(mut self, axis: Axis, r: (f64, f64)) -> Self {
        match axis {
            Axis::X1 => self.x = r,
            Axis::X2 => self.y = r,
        }
        self
    }

    pub fn is_degenerate(&self) -> bool {
        !(self.x.1 > self.x.0 && self.y.1 > self.y.0)
    }

    pub fn contains(&self, p: [f64; 2], tol: f64) -> bool {
        p[0] >= self.x.0 - tol && p[0] <= self.x.1 + tol && p[1] >= self.y.0 - tol && p[1] <= self.y.1 + tol
    }

    pub fn intersect(&self, other: &Rect) -> Rect {
        Rect {
            x: (self.x.0.max(other.x.0), self.x.1.min(other.x.1)),
            y: (self.y.0.max(other.y.0), self.y.1.min(other.y.1)),
        }
    }
}

/// Uniform split of `(-half_width, half_width)` into `count` pieces with
/// interfaces `zeta(1) = -half_width, ..., zeta(count + 1) = half_width`.
///
/// Indices follow the one-based layer/block numbering used throughout the
/// crate: piece `i` is `[zeta(i), zeta(i + 1)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisPartition {
    half_width: f64,
    zeta: Vec<f64>,
}

impl AxisPartition {
    pub fn new(half_width: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::Config("partition needs at least one piece".into()));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::Config(format!("invalid half width {half_width}")));
        }
        let width = 2.0 * half_width / count as f64;
        let mut zeta: Vec<f64> = (0..=count).map(|m| -half_width + m as f64 * width).collect();
        // Pin the end points so shifted PML arguments vanish exactly.
        zeta[0] = -half_width;
        zeta[count] = half_width;
        Ok(AxisPartition { half_width, zeta })
    }

    pub fn count(&self) -> usize {
        self.zeta.len() - 1
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.count() as f64
    }

    /// Interface `zeta_i`, `1 <= i <= count + 1`.
    pub fn zeta(&self, i: usize) -> f64 {
        assert!(i >= 1 && i <= self.zeta.len(), "interface index {i} out of range");
        self.zeta[i - 1]
    }

    pub fn interfaces(&self) -> &[f64] {
        &self.zeta
    }

    /// One-based piece owning coordinate `t` with half-open pieces
    /// `[zeta_i, zeta_{i+1})`; the last piece also owns its top end and
    /// everything beyond, the first piece everything below.
    pub fn owner_lower_closed(&self, t: f64, tol: f64) -> usize {
        let n = self.count();
        for i in 1..n {
            if t < self.zeta[i] - tol {
                return i;
            }
        }
        n
    }

    /// One-based piece owning `t` with pieces `(zeta_i, zeta_{i+1}]`; the
    /// first piece owns its bottom end and everything below.
    pub fn owner_upper_closed(&self, t: f64, tol: f64) -> usize {
        let n = self.count();
        for i in 1..n {
            if t <= self.zeta[i] + tol {
                return i;
            }
        }
        n
    }
}
