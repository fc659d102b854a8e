//! The radially symmetric benchmark: `u = v(r) H0(kr)` inside the unit disc
//! with `v(r) = -r^3 (r^3 + 3r^2 - 12r + 9)`, and `u = -H0(kr)` outside.
//! `v(1) = -1` and `v'(1) = v''(1) = 0`, so `u` is C^2 and the source
//! `f = Laplacian(u) + k^2 u` vanishes outside the disc.

use num_complex::Complex64;

use crate::specfun::{hankel1_first_real, hankel0_first};

/// Below this radius the r^3 factor wins and values are returned as 0.
const ORIGIN: f64 = 1e-12;

fn radial(r: f64) -> (f64, f64, f64) {
    let r2 = r * r;
    let r3 = r2 * r;
    let v = -r3 * (r3 + 3.0 * r2 - 12.0 * r + 9.0);
    let dv = -(6.0 * r3 * r2 + 15.0 * r3 * r - 48.0 * r3 + 27.0 * r2);
    let ddv = -(30.0 * r3 * r + 60.0 * r3 - 144.0 * r2 + 54.0 * r);
    (v, dv, ddv)
}

fn h0(x: f64) -> Complex64 {
    hankel0_first(Complex64::new(x, 0.0)).expect("positive real argument")
}

fn h1(x: f64) -> Complex64 {
    hankel1_first_real(x).expect("positive real argument")
}

pub fn exact_solution(x: [f64; 2], k: f64) -> Complex64 {
    let r = x[0].hypot(x[1]);
    if r <= ORIGIN {
        return Complex64::new(0.0, 0.0);
    }
    let w = h0(k * r);
    if r >= 1.0 {
        return -w;
    }
    radial(r).0 * w
}

pub fn exact_gradient(x: [f64; 2], k: f64) -> [Complex64; 2] {
    let r = x[0].hypot(x[1]);
    if r <= ORIGIN {
        return [Complex64::new(0.0, 0.0); 2];
    }
    // H0' = -H1.
    let dw = -k * h1(k * r);
    let du = if r >= 1.0 {
        -dw
    } else {
        let (v, dv, _) = radial(r);
        dv * h0(k * r) + v * dw
    };
    [du * (x[0] / r), du * (x[1] / r)]
}

pub fn source_term(x: [f64; 2], k: f64) -> Complex64 {
    let r = x[0].hypot(x[1]);
    if r <= ORIGIN || r >= 1.0 {
        return Complex64::new(0.0, 0.0);
    }
    let (_, dv, ddv) = radial(r);
    let w = h0(k * r);
    let dw = -k * h1(k * r);
    w * (ddv + dv / r) + 2.0 * dv * dw
}
