//! PML medium profiles, complex coordinate stretchings and the resulting
//! coefficient fields `A = diag(a2/a1, a1/a2)`, `J = a1 a2`.
//!
//! Every stretching used by the solvers (global, per layer, per block) has
//! the same shape: an unstretched window `[lo, hi]` on each axis and, outside
//! it, a copy of the global ramp shifted so that it starts at the window edge.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Axis, AxisPartition, Rect};
use crate::specfun::{branch_sqrt, hankel0_first};

/// Absorption profile per axis: `sigma = 0` on `|t| <= l`, a smooth ramp on
/// `l < |t| < l_bar`, and `sigma = gamma0` beyond `l_bar`. The PML ends at
/// `l + d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PmlProfile {
    pub l: [f64; 2],
    pub l_bar: [f64; 2],
    pub d: [f64; 2],
    pub gamma0: f64,
}

impl PmlProfile {
    pub fn new(l: [f64; 2], l_bar: [f64; 2], d: [f64; 2], gamma0: f64) -> Result<Self> {
        let p = PmlProfile { l, l_bar, d, gamma0 };
        p.check()?;
        Ok(p)
    }

    /// The benchmark geometry: inner box 2.2 x 2.2, PML 0.2 thick along x1
    /// and 0.1 along x2, saturation at 1.18.
    pub fn benchmark(gamma0: f64) -> Self {
        PmlProfile {
            l: [1.1, 1.1],
            l_bar: [1.18, 1.18],
            d: [0.2, 0.1],
            gamma0,
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.gamma0 > 0.0) || !self.gamma0.is_finite() {
            return Err(Error::Config(format!("gamma0 must be positive, got {}", self.gamma0)));
        }
        for j in 0..2 {
            let (l, lb, d) = (self.l[j], self.l_bar[j], self.d[j]);
            if !(l > 0.0 && l < lb && lb < l + d) {
                return Err(Error::Config(format!(
                    "axis {}: need 0 < l < l_bar < l + d, got l={l}, l_bar={lb}, d={d}",
                    j + 1
                )));
            }
        }
        Ok(())
    }

    /// Inner box `B_l` where the medium is unstretched.
    pub fn inner_box(&self) -> Rect {
        Rect::new((-self.l[0], self.l[0]), (-self.l[1], self.l[1]))
    }

    /// Computational box `B_L` including the PML.
    pub fn outer_box(&self) -> Rect {
        let e = [self.l[0] + self.d[0], self.l[1] + self.d[1]];
        Rect::new((-e[0], e[0]), (-e[1], e[1]))
    }

    fn ramp(&self, t: f64, axis: Axis) -> (f64, f64) {
        let j = axis.index();
        let (l, lb) = (self.l[j], self.l_bar[j]);
        let w = lb - l;
        ((t - l) / w, w)
    }

    /// Normalized integral of `(s - l)^2 (l_bar - s)^2`, scaled to reach
    /// `gamma0` at `l_bar`. Defined on `[l, l_bar]`.
    pub fn sigma_hat(&self, t: f64, axis: Axis) -> Result<f64> {
        let j = axis.index();
        if !(t >= self.l[j] && t <= self.l_bar[j]) {
            return Err(Error::Domain(format!(
                "sigma_hat argument {t} outside [{}, {}]",
                self.l[j], self.l_bar[j]
            )));
        }
        let (tau, _) = self.ramp(t, axis);
        Ok(self.gamma0 * smoothstep(tau))
    }

    /// `sigma_j(t)`, even in `t`; on the ramp `sigma = d/dt[(t - l) sigma_hat]`.
    pub fn sigma(&self, t: f64, axis: Axis) -> f64 {
        let j = axis.index();
        let a = t.abs();
        if a <= self.l[j] {
            0.0
        } else if a >= self.l_bar[j] {
            self.gamma0
        } else {
            let (tau, _) = self.ramp(a, axis);
            self.gamma0 * tau * tau * tau * (40.0 - 75.0 * tau + 36.0 * tau * tau)
        }
    }

    /// `d sigma_j / dt`, odd in `t`.
    pub fn sigma_derivative(&self, t: f64, axis: Axis) -> f64 {
        let j = axis.index();
        let a = t.abs();
        if a <= self.l[j] || a >= self.l_bar[j] {
            0.0
        } else {
            let (tau, w) = self.ramp(a, axis);
            let v = 60.0 * self.gamma0 * tau * tau * (1.0 - tau) * (2.0 - 3.0 * tau) / w;
            v * t.signum()
        }
    }

    /// `int_l^t sigma_j` for `t >= l`, in closed form.
    pub fn ramp_integral(&self, t: f64, axis: Axis) -> f64 {
        let j = axis.index();
        let (l, lb) = (self.l[j], self.l_bar[j]);
        if t <= l {
            0.0
        } else if t >= lb {
            self.gamma0 * (t - l)
        } else {
            let (tau, _) = self.ramp(t, axis);
            (t - l) * self.gamma0 * smoothstep(tau)
        }
    }

    /// `int_0^t sigma_j`, odd in `t`.
    pub fn absorption(&self, t: f64, axis: Axis) -> f64 {
        self.ramp_integral(t.abs(), axis) * t.signum()
    }

    /// Global stretching `x + i int_0^x sigma_j`.
    pub fn stretch_1d(&self, x: f64, axis: Axis) -> Complex64 {
        Complex64::new(x, self.absorption(x, axis))
    }

    /// `sigma_bar = int_{l2}^{l2 + d2} sigma_2`.
    pub fn sigma_bar(&self) -> f64 {
        self.ramp_integral(self.l[1] + self.d[1], Axis::X2)
    }
}

/// `10 t^3 - 15 t^4 + 6 t^5`: the normalized integral of `t^2 (1 - t)^2`.
fn smoothstep(tau: f64) -> f64 {
    tau * tau * tau * (10.0 + tau * (-15.0 + 6.0 * tau))
}

/// Unstretched interval `[lo, hi]` on one axis; outside it the global ramp of
/// that axis is replayed starting at the interval end.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StretchWindow {
    pub lo: f64,
    pub hi: f64,
    shift_lo: f64,
    shift_hi: f64,
}

impl StretchWindow {
    fn new(lo: f64, hi: f64, l: f64) -> Self {
        StretchWindow {
            lo,
            hi,
            shift_lo: lo + l,
            shift_hi: hi - l,
        }
    }

    fn sigma(&self, profile: &PmlProfile, axis: Axis, t: f64) -> f64 {
        if t > self.hi {
            profile.sigma(t - self.shift_hi, axis)
        } else if t < self.lo {
            profile.sigma(t - self.shift_lo, axis)
        } else {
            0.0
        }
    }

    fn sigma_derivative(&self, profile: &PmlProfile, axis: Axis, t: f64) -> f64 {
        if t > self.hi {
            profile.sigma_derivative(t - self.shift_hi, axis)
        } else if t < self.lo {
            profile.sigma_derivative(t - self.shift_lo, axis)
        } else {
            0.0
        }
    }

    fn stretch(&self, profile: &PmlProfile, axis: Axis, t: f64) -> Complex64 {
        let l = profile.l[axis.index()];
        let im = if t > self.hi {
            profile.ramp_integral(t - self.shift_hi, axis)
        } else if t < self.lo {
            -profile.ramp_integral(l + (self.lo - t), axis)
        } else {
            0.0
        };
        Complex64::new(t, im)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectorKind {
    Global,
    LayerLocal { layer: usize },
    BlockLocal { layer: usize, block: usize },
}

/// Which stretching a subproblem uses, resolved to one window per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StretchSelector {
    kind: SelectorKind,
    windows: [StretchWindow; 2],
}

impl StretchSelector {
    pub fn global(profile: &PmlProfile) -> Self {
        let w = |j: usize| StretchWindow::new(-profile.l[j], profile.l[j], profile.l[j]);
        StretchSelector {
            kind: SelectorKind::Global,
            windows: [w(0), w(1)],
        }
    }

    /// Stretching of the layer subproblem on `(zeta_i - d2, zeta_{i+2} + d2)`:
    /// unstretched on `[zeta_i, zeta_{i+2}]` along x2, global along x1.
    pub fn layer_local(profile: &PmlProfile, layers: &AxisPartition, layer: usize) -> Result<Self> {
        let n = layers.count();
        if n < 2 || layer < 1 || layer > n - 1 {
            return Err(Error::Config(format!("layer index {layer} out of range 1..={}", n.max(1) - 1)));
        }
        check_partition(profile, layers, Axis::X2)?;
        let mut s = StretchSelector::global(profile);
        s.kind = SelectorKind::LayerLocal { layer };
        s.windows[1] = StretchWindow::new(layers.zeta(layer), layers.zeta(layer + 2), profile.l[1]);
        Ok(s)
    }

    /// Stretching of block `(layer, block)`: the layer's x2 stretching and an
    /// x1 window `[zeta_j, zeta_{j+2}]` of the block partition.
    pub fn block_local(
        profile: &PmlProfile,
        layers: &AxisPartition,
        layer: usize,
        blocks: &AxisPartition,
        block: usize,
    ) -> Result<Self> {
        let m = blocks.count();
        if m < 2 || block < 1 || block > m - 1 {
            return Err(Error::Config(format!("block index {block} out of range 1..={}", m.max(1) - 1)));
        }
        check_partition(profile, blocks, Axis::X1)?;
        let mut s = if layers.count() == 1 {
            StretchSelector::global(profile)
        } else {
            StretchSelector::layer_local(profile, layers, layer)?
        };
        s.kind = SelectorKind::BlockLocal { layer, block };
        s.windows[0] = StretchWindow::new(blocks.zeta(block), blocks.zeta(block + 2), profile.l[0]);
        Ok(s)
    }

    pub fn kind(&self) -> SelectorKind {
        self.kind
    }

    pub fn window(&self, axis: Axis) -> StretchWindow {
        self.windows[axis.index()]
    }

    /// `alpha_j = 1 + i sigma_j` with the selector's shifted argument.
    pub fn alpha(&self, profile: &PmlProfile, axis: Axis, t: f64) -> Complex64 {
        Complex64::new(1.0, self.windows[axis.index()].sigma(profile, axis, t))
    }

    /// `d alpha_j / dt = i sigma_j'`.
    pub fn alpha_derivative(&self, profile: &PmlProfile, axis: Axis, t: f64) -> Complex64 {
        Complex64::new(0.0, self.windows[axis.index()].sigma_derivative(profile, axis, t))
    }

    /// Stretched coordinate along one axis.
    pub fn stretch(&self, profile: &PmlProfile, axis: Axis, t: f64) -> Complex64 {
        self.windows[axis.index()].stretch(profile, axis, t)
    }
}

fn check_partition(profile: &PmlProfile, p: &AxisPartition, axis: Axis) -> Result<()> {
    let l = profile.l[axis.index()];
    if (p.half_width() - l).abs() > 1e-12 * l {
        return Err(Error::Config(format!(
            "partition half width {} does not match l = {l} along {axis:?}",
            p.half_width()
        )));
    }
    Ok(())
}

/// `A = diag(a11, a22)` and `J` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StretchCoefficients {
    pub a11: Complex64,
    pub a22: Complex64,
    pub jac: Complex64,
}

impl StretchCoefficients {
    pub fn from_alphas(a1: Complex64, a2: Complex64) -> Self {
        StretchCoefficients {
            a11: a2 / a1,
            a22: a1 / a2,
            jac: a1 * a2,
        }
    }
}

pub fn coefficients_at(x: [f64; 2], selector: &StretchSelector, profile: &PmlProfile) -> StretchCoefficients {
    let a1 = selector.alpha(profile, Axis::X1, x[0]);
    let a2 = selector.alpha(profile, Axis::X2, x[1]);
    StretchCoefficients::from_alphas(a1, a2)
}

/// `rho = [(x1 - y1)^2 + (x2 - y2)^2]^{1/2}` on the `Re >= 0` branch.
pub fn complex_distance(xt: [Complex64; 2], yt: [Complex64; 2]) -> Complex64 {
    let d1 = xt[0] - yt[0];
    let d2 = xt[1] - yt[1];
    branch_sqrt(d1 * d1 + d2 * d2)
}

/// Stretched free-space Green's function `(i/4) H0(k rho(x~, y~))`.
pub fn stretched_green(k: f64, x: [f64; 2], y: [f64; 2], profile: &PmlProfile) -> Result<Complex64> {
    let st = |p: [f64; 2]| [profile.stretch_1d(p[0], Axis::X1), profile.stretch_1d(p[1], Axis::X2)];
    let rho = complex_distance(st(x), st(y));
    Ok(Complex64::new(0.0, 0.25) * hankel0_first(k * rho)?)
}

/// Outcome of the layer-mode PML assumptions.
#[derive(Clone, Debug, PartialEq)]
pub struct H1Report {
    pub sigma_bar: f64,
    /// `int_{l1}^{l1+d2} sigma_1 = int_{l2}^{l2+d2} sigma_2`.
    pub inner_bands_equal: bool,
    /// `int_{l1+d2}^{l1+d1} sigma_1 >= sigma_bar`.
    pub outer_band_ok: bool,
    /// `l1 <= l2`.
    pub order_ok: bool,
    /// `d1 = 2 d2`.
    pub thickness_ok: bool,
    /// Both ramps saturate within the first `d2` band.
    pub saturated: bool,
    pub violations: Vec<String>,
}

impl H1Report {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

const ASSUMPTION_TOL: f64 = 1e-12;

pub fn validate_h1(profile: &PmlProfile) -> H1Report {
    let [l1, l2] = profile.l;
    let [d1, d2] = profile.d;
    let sigma_bar = profile.ramp_integral(l2 + d2, Axis::X2);
    let first = profile.ramp_integral(l1 + d2, Axis::X1);
    let outer = profile.ramp_integral(l1 + d1, Axis::X1) - first;
    let tol = ASSUMPTION_TOL * sigma_bar.abs().max(1.0);
    let inner_bands_equal = (first - sigma_bar).abs() <= tol;
    let outer_band_ok = outer >= sigma_bar - tol;
    let order_ok = l1 <= l2;
    let thickness_ok = (d1 - 2.0 * d2).abs() <= ASSUMPTION_TOL * d1;
    let saturated = profile.l_bar[0] <= l1 + d2 && profile.l_bar[1] <= l2 + d2;
    let mut violations = Vec::new();
    if !inner_bands_equal {
        violations.push(format!(
            "int_{{l1}}^{{l1+d2}} sigma_1 = {first} differs from int_{{l2}}^{{l2+d2}} sigma_2 = {sigma_bar}"
        ));
    }
    if !outer_band_ok {
        violations.push(format!("int_{{l1+d2}}^{{l1+d1}} sigma_1 = {outer} is below sigma_bar = {sigma_bar}"));
    }
    if !order_ok {
        violations.push(format!("l1 = {l1} exceeds l2 = {l2}"));
    }
    if !thickness_ok {
        violations.push(format!("d1 = {d1} is not 2 d2 = {}", 2.0 * d2));
    }
    H1Report {
        sigma_bar,
        inner_bands_equal,
        outer_band_ok,
        order_ok,
        thickness_ok,
        saturated,
        violations,
    }
}

/// Outcome of the block-mode assumption on the x1 PML of width `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct H2Report {
    pub sigma_bar: f64,
    /// `int_l^{l+d/2} sigma_1`.
    pub first_half: f64,
    /// `int_{l+d/2}^{l+d} sigma_1`.
    pub second_half: f64,
    pub violations: Vec<String>,
}

impl H2Report {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_h2(profile: &PmlProfile, d: f64) -> H2Report {
    let l = profile.l[0];
    let sigma_bar = profile.sigma_bar();
    let first_half = profile.ramp_integral(l + 0.5 * d, Axis::X1);
    let second_half = profile.ramp_integral(l + d, Axis::X1) - first_half;
    let tol = ASSUMPTION_TOL * sigma_bar.abs().max(1.0);
    let mut violations = Vec::new();
    if first_half < sigma_bar - tol {
        violations.push(format!("int_{{l}}^{{l+d/2}} sigma_1 = {first_half} is below sigma_bar = {sigma_bar}"));
    }
    if second_half < sigma_bar - tol {
        violations.push(format!(
            "int_{{l+d/2}}^{{l+d}} sigma_1 = {second_half} is below sigma_bar = {sigma_bar}"
        ));
    }
    H2Report {
        sigma_bar,
        first_half,
        second_half,
        violations,
    }
}
