//! A smooth manufactured solution for convergence studies: the bump
//! `u = (1 - |x - c|^2 / R^2)^4` inside the disc of radius `R`, zero outside.
//! It is C^3, so Q1 converges at its full first order in the H^1-seminorm.
//! When the disc lies inside the unstretched box, `u` solves the PML problem
//! with source `f = Laplacian(u) + k^2 u` and zero Dirichlet data.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump {
    pub centre: [f64; 2],
    pub radius: f64,
    pub k: f64,
}

impl Bump {
    pub fn new(centre: [f64; 2], radius: f64, k: f64) -> Self {
        Bump { centre, radius, k }
    }

    /// `(s, dx)` with `s = 1 - |x - c|^2 / R^2`.
    fn local(&self, x: [f64; 2]) -> (f64, [f64; 2]) {
        let d = [x[0] - self.centre[0], x[1] - self.centre[1]];
        let r2 = (d[0] * d[0] + d[1] * d[1]) / (self.radius * self.radius);
        (1.0 - r2, d)
    }

    pub fn value(&self, x: [f64; 2]) -> Complex64 {
        let (s, _) = self.local(x);
        Complex64::new(if s > 0.0 { s.powi(4) } else { 0.0 }, 0.0)
    }

    pub fn gradient(&self, x: [f64; 2]) -> [Complex64; 2] {
        let (s, d) = self.local(x);
        if s <= 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        let c = -8.0 * s.powi(3) / (self.radius * self.radius);
        [Complex64::new(c * d[0], 0.0), Complex64::new(c * d[1], 0.0)]
    }

    pub fn source(&self, x: [f64; 2]) -> Complex64 {
        let (s, d) = self.local(x);
        if s <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let r2 = self.radius * self.radius;
        let rho2 = (d[0] * d[0] + d[1] * d[1]) / r2;
        let lap = (-16.0 * s.powi(3) + 48.0 * rho2 * s * s) / r2;
        Complex64::new(lap + self.k * self.k * s.powi(4), 0.0)
    }
}
