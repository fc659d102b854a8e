use crate::geometry::{Axis, AxisPartition};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// 1 below the transition band of piece `i`, 0 above it.
    Plus,
    /// `1 - Plus`.
    Minus,
}

/// C^1 cutoff attached to piece `i` of a partition: `beta_i^+` is 1 below
/// `zeta_i + w/4`, 0 above `zeta_i + 3w/4`, and the quartic
/// `1 + s^4 - 2 s^2` in between (`w` the piece width).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffSpec {
    pub axis: Axis,
    pub orientation: Orientation,
    /// Lower interface `zeta_i` of the piece carrying the transition.
    pub lower: f64,
    /// Piece width.
    pub width: f64,
}

impl CutoffSpec {
    /// Cutoff for piece `i` (one-based) of `partition`.
    pub fn new(partition: &AxisPartition, i: usize, orientation: Orientation, axis: Axis) -> Self {
        CutoffSpec {
            axis,
            orientation,
            lower: partition.zeta(i),
            width: partition.spacing(),
        }
    }

    /// Transition band `(zeta_i + w/4, zeta_i + 3w/4)`.
    pub fn band(&self) -> (f64, f64) {
        (self.lower + 0.25 * self.width, self.lower + 0.75 * self.width)
    }

    /// `(beta, beta')` at coordinate `t` along the cutoff axis.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let (v, d, _) = self.eval_plus(t);
        match self.orientation {
            Orientation::Plus => (v, d),
            Orientation::Minus => (1.0 - v, -d),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(t).0
    }

    /// Second derivative (test oracles only need it, production never forms it).
    pub fn second_derivative(&self, t: f64) -> f64 {
        let (_, _, dd) = self.eval_plus(t);
        match self.orientation {
            Orientation::Plus => dd,
            Orientation::Minus => -dd,
        }
    }

    fn eval_plus(&self, t: f64) -> (f64, f64, f64) {
        let (a, b) = self.band();
        if t <= a {
            return (1.0, 0.0, 0.0);
        }
        if t >= b {
            return (0.0, 0.0, 0.0);
        }
        let half = 0.5 * self.width;
        let s = (t - a) / half;
        let s2 = s * s;
        (
            1.0 + s2 * s2 - 2.0 * s2,
            (4.0 * s2 * s - 4.0 * s) / half,
            (12.0 * s2 - 4.0) / (half * half),
        )
    }
}

/// `beta` evaluated at a point of the plane.
pub fn beta_eval(x: [f64; 2], spec: &CutoffSpec) -> (f64, f64) {
    spec.eval(x[spec.axis.index()])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(o: Orientation) -> CutoffSpec {
        let p = AxisPartition::new(1.1, 4).unwrap();
        CutoffSpec::new(&p, 2, o, Axis::X2)
    }

    #[test]
    fn plateau_and_midpoint() {
        let s = spec(Orientation::Plus);
        assert_eq!(s.eval(s.lower), (1.0, 0.0));
        let (v, d) = s.eval(s.lower + 0.5 * s.width);
        assert!((v - 0.5625).abs() < 1e-15);
        assert!((d - (-1.5 / (0.5 * s.width))).abs() < 1e-12);
        assert_eq!(s.eval(s.lower + s.width), (0.0, 0.0));
    }

    #[test]
    fn plus_and_minus_sum_to_one() {
        let p = spec(Orientation::Plus);
        let m = spec(Orientation::Minus);
        for k in 0..1000 {
            let t = -1.2 + 2.4 * k as f64 / 999.0;
            assert_eq!(p.value(t) + m.value(t), 1.0);
            assert_eq!(p.eval(t).1 + m.eval(t).1, 0.0);
        }
    }

    #[test]
    fn continuity_at_band_edges() {
        let s = spec(Orientation::Plus);
        let (a, b) = s.band();
        for e in [a, b] {
            let l = s.eval(e - 1e-9);
            let r = s.eval(e + 1e-9);
            assert!((l.0 - r.0).abs() < 1e-8);
            assert!((l.1 - r.1).abs() < 1e-6);
        }
    }
}
