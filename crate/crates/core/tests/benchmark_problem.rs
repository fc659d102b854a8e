//! The analytic benchmark solution and its source term.

use num_complex::Complex64;
use pstddm::harness::{exact_gradient, exact_solution, source_term};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Fourth-order central Laplacian of `u` with spacing `h`.
fn fd_laplacian(u: impl Fn([f64; 2]) -> Complex64, x: [f64; 2], h: f64) -> Complex64 {
    let mut lap = Complex64::new(0.0, 0.0);
    for axis in 0..2 {
        let at = |s: f64| {
            let mut p = x;
            p[axis] += s * h;
            u(p)
        };
        lap += (-at(2.0) + 16.0 * at(1.0) - 30.0 * at(0.0) + 16.0 * at(-1.0) - at(-2.0)) / (12.0 * h * h);
    }
    lap
}

#[test]
fn source_matches_finite_difference_helmholtz_operator() {
    let k = TAU * 2.0;
    for x in [[0.5, 0.0], [0.3, 0.4], [-0.1, -0.49], [0.2, 0.7], [0.05, 0.05]] {
        let u = |p: [f64; 2]| exact_solution(p, k);
        let fd = fd_laplacian(u, x, 1e-4) + k * k * u(x);
        let f = source_term(x, k);
        assert!((fd - f).norm() <= 1e-5 * f.norm(), "x = {x:?}: {fd} vs {f}");
    }
}

#[test]
fn outside_the_unit_disc_is_the_negated_hankel_function() {
    // J0(2) and Y0(2) from tables.
    let expected = -Complex64::new(0.223_890_779_141_235_67, 0.510_375_672_649_745_1);
    let u = exact_solution([2.0f64.sqrt(), 2.0f64.sqrt()], 1.0);
    assert!((u - expected).norm() < 1e-12, "{u}");
    assert_eq!(source_term([1.5, 0.2], 3.0), Complex64::new(0.0, 0.0));
    assert_eq!(exact_solution([0.0, 0.0], 3.0), Complex64::new(0.0, 0.0));
}

#[test]
fn gradient_matches_finite_differences() {
    let k = TAU * 2.0;
    let h = 1e-5;
    for x in [[0.5, 0.0], [0.3, 0.4], [0.9, -0.5], [1.2, 0.3], [-0.01, 0.02]] {
        let g = exact_gradient(x, k);
        for axis in 0..2 {
            let (mut a, mut b) = (x, x);
            a[axis] += h;
            b[axis] -= h;
            let fd = (exact_solution(a, k) - exact_solution(b, k)) / (2.0 * h);
            assert!((fd - g[axis]).norm() <= 1e-6 * (1.0 + g[axis].norm()), "x = {x:?} axis {axis}");
        }
    }
}

#[test]
fn solution_is_continuous_across_the_unit_circle() {
    let k = TAU * 2.0;
    for theta in [0.0f64, 0.7, 2.0, 4.4] {
        let (c, s) = (theta.cos(), theta.sin());
        let inside = exact_solution([(1.0 - 1e-9) * c, (1.0 - 1e-9) * s], k);
        let outside = exact_solution([(1.0 + 1e-9) * c, (1.0 + 1e-9) * s], k);
        assert!((inside - outside).norm() < 1e-7);
        assert!(source_term([(1.0 - 1e-9) * c, (1.0 - 1e-9) * s], k).norm() < 1e-6);
    }
}
