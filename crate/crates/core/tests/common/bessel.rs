//! Ascending power series for J0, J1, Y0, Y1 in double-double arithmetic.

use std::f64::consts::PI;

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl Dd {
    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Dd { hi: s, lo: err }
    }

    pub fn renorm(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        Dd { hi: s, lo: lo - (s - hi) }
    }

    pub fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let t = Dd::two_sum(self.lo, o.lo);
        let r = Dd::renorm(s.hi, s.lo + t.hi);
        Dd::renorm(r.hi, r.lo + t.lo)
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Dd::renorm(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    pub fn div_f(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let p = q1 * d;
        let pe = q1.mul_add(d, -p);
        let r = Dd::two_sum(self.hi, -p);
        let rem = r.hi + (r.lo + self.lo - pe);
        let q2 = rem / d;
        Dd::renorm(q1, q2)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// (J0, J1, S0, S1) where S0 = sum_{k>=1} (-1)^{k+1} H_k (x^2/4)^k/(k!)^2 and
/// S1 = sum_{k>=0} (-1)^k (H_k + H_{k+1}) (x/2)^{2k+1}/(k!(k+1)!).
fn series(x: f64) -> (f64, f64, f64, f64) {
    let xx = Dd::new(x).mul(Dd::new(x)).div_f(4.0);
    let half = Dd::new(x).div_f(2.0);
    let mut t0 = Dd::new(1.0); // (x^2/4)^k/(k!)^2 with sign
    let mut t1 = half; // (x/2)^{2k+1}/(k!(k+1)!) with sign
    let mut j0 = t0;
    let mut j1 = t1;
    let mut s0 = Dd::new(0.0);
    let mut harmonic = Dd::new(0.0);
    let mut s1 = t1; // k = 0: H_0 + H_1 = 1
    for k in 1..400 {
        let kf = k as f64;
        harmonic = harmonic.add(Dd::new(1.0).div_f(kf));
        let next_harmonic = harmonic.add(Dd::new(1.0).div_f(kf + 1.0));
        t0 = t0.mul(xx).div_f(kf * kf).neg();
        t1 = t1.mul(xx).div_f(kf * (kf + 1.0)).neg();
        j0 = j0.add(t0);
        j1 = j1.add(t1);
        s0 = s0.add(t0.mul(harmonic).neg());
        s1 = s1.add(t1.mul(harmonic.add(next_harmonic)));
        if t0.hi.abs() * (1.0 + harmonic.hi) < 1e-40 && k > 10 {
            break;
        }
    }
    (j0.to_f64(), j1.to_f64(), s0.to_f64(), s1.to_f64())
}

pub fn oracle(x: f64) -> (f64, f64, f64, f64) {
    let (j0, j1, s0, s1) = series(x);
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let y0 = 2.0 / PI * (log_term * j0 + s0);
    let y1 = 2.0 / PI * log_term * j1 - 2.0 / (PI * x) - s1 / PI;
    (j0, j1, y0, y1)
}
