//! Bessel and Hankel functions of orders 0 and 1.
//!
//! Real arguments use Miller's backward recurrence (normalized with
//! `J0 + 2 sum J_2k = 1`) together with the Neumann series for `Y0`, and the
//! Hankel asymptotic expansion for large arguments. The complex `H0` combines
//! the ascending series, the asymptotic expansion and a trapezoid rule for the
//! Macdonald integral of `K0` when the argument sits high in the upper half
//! plane and the series would cancel badly.

use num_complex::Complex64;
use std::f64::consts::{FRAC_2_PI, FRAC_PI_4, PI};

use crate::error::{Error, Result};

pub type ComplexValue = Complex64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Above this argument the asymptotic expansion is used for real Bessel functions.
const REAL_ASYMPTOTIC_MIN: f64 = 30.0;

/// Above this modulus the Hankel asymptotic expansion is used for complex H0.
const COMPLEX_ASYMPTOTIC_MIN: f64 = 14.0;

/// Below this imaginary part (and modulus) the ascending series is accurate.
const SERIES_MAX_IMAG: f64 = 2.0;

pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x >= REAL_ASYMPTOTIC_MIN {
        return hankel_asymptotic(0, Complex64::new(x, 0.0)).re;
    }
    if x == 0.0 {
        return 1.0;
    }
    miller(x).j0
}

pub fn bessel_j1(x: f64) -> f64 {
    let s = x.signum();
    let x = x.abs();
    if x >= REAL_ASYMPTOTIC_MIN {
        return s * hankel_asymptotic(1, Complex64::new(x, 0.0)).re;
    }
    if x == 0.0 {
        return 0.0;
    }
    s * miller(x).j1
}

pub fn bessel_y0(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("y0 requires a positive argument, got {x}")));
    }
    if x >= REAL_ASYMPTOTIC_MIN {
        return Ok(hankel_asymptotic(0, Complex64::new(x, 0.0)).im);
    }
    Ok(miller(x).y0)
}

pub fn bessel_y1(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("y1 requires a positive argument, got {x}")));
    }
    if x >= REAL_ASYMPTOTIC_MIN {
        return Ok(hankel_asymptotic(1, Complex64::new(x, 0.0)).im);
    }
    Ok(miller(x).y1)
}

/// `H1^(1)(x) = J1(x) + i Y1(x)` for real `x > 0`.
pub fn hankel1_first_real(x: f64) -> Result<Complex64> {
    Ok(Complex64::new(bessel_j1(x), bessel_y1(x)?))
}

struct MillerValues {
    j0: f64,
    j1: f64,
    y0: f64,
    y1: f64,
}

/// Backward recurrence for `J_n(x)`, `0 < x < REAL_ASYMPTOTIC_MIN`.
fn miller(x: f64) -> MillerValues {
    // Start index well beyond x so that the neglected tail is below 1e-17.
    let mut start = (x + 12.0 * x.cbrt() + 30.0) as usize;
    start += start % 2;
    let mut j = vec![0.0f64; start + 2];
    j[start + 1] = 0.0;
    j[start] = 1e-300;
    for n in (1..=start).rev() {
        j[n - 1] = 2.0 * n as f64 / x * j[n] - j[n + 1];
        if j[n - 1].abs() > 1e250 {
            for v in j[n - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let mut norm = j[0];
    for k in (2..=start).step_by(2) {
        norm += 2.0 * j[k];
    }
    for v in j.iter_mut() {
        *v /= norm;
    }

    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    // Neumann series for Y0 and its derivative.
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k + 1 <= start {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sign * j[2 * k] / k as f64;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k as f64;
        k += 1;
    }
    let y0 = FRAC_2_PI * (log_term * j[0] - 2.0 * s0);
    let y1 = FRAC_2_PI * (log_term * j[1] - j[0] / x + s1);
    MillerValues {
        j0: j[0],
        j1: j[1],
        y0,
        y1,
    }
}

/// Hankel asymptotic expansion of `H_order^(1)(z)`, valid for large `|z|`
/// with `-pi < arg z < 2 pi`. Terms are summed until they stop decreasing.
fn hankel_asymptotic(order: u32, z: Complex64) -> Complex64 {
    let mu = 4.0 * (order * order) as f64;
    let inv = 1.0 / z;
    let i = Complex64::i();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = term * i * inv * ((mu - odd * odd) / (8.0 * k as f64));
        let size = next.norm();
        if size >= prev || size == 0.0 {
            break;
        }
        sum += next;
        term = next;
        prev = size;
        if size < 1e-17 * sum.norm() {
            break;
        }
    }
    let phase = z - (order as f64) * 0.5 * PI - FRAC_PI_4;
    (Complex64::new(FRAC_2_PI, 0.0) / z).sqrt() * (i * phase).exp() * sum
}

/// Ascending series `J0 + i Y0` with the principal logarithm.
fn hankel0_series(z: Complex64) -> Complex64 {
    let q = -0.25 * z * z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut j0 = term;
    let mut tail = Complex64::new(0.0, 0.0);
    let mut harmonic = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        term = term * q / (kf * kf);
        harmonic += 1.0 / kf;
        j0 += term;
        tail += term * harmonic;
        if term.norm() * harmonic < 1e-18 * j0.norm().max(1e-300) && k > 4 {
            break;
        }
    }
    // Y0 = (2/pi)[(ln(z/2)+gamma) J0 - sum (-z^2/4)^k/(k!)^2 H_k]
    let y0 = FRAC_2_PI * (((0.5 * z).ln() + EULER_GAMMA) * j0 - tail);
    j0 + Complex64::i() * y0
}

/// `H0^(1)(z) = -(2i/pi) K0(-iz)` with `K0(w) = int_0^inf exp(-w cosh t) dt`,
/// evaluated by the trapezoid rule with step halving. Requires `Re(-iz) > 0`.
fn hankel0_integral(z: Complex64) -> Complex64 {
    let w = -Complex64::i() * z;
    // exp(-Re w cosh t) < 1e-18 beyond t_max.
    let t_max = (42.0 / w.re).max(1.0).acosh() + 0.5;
    let f = |t: f64| (-w * t.cosh()).exp();
    let mut n = 64usize;
    let mut h = t_max / n as f64;
    let mut sum = 0.5 * f(0.0) + 0.5 * f(t_max);
    for m in 1..n {
        sum += f(m as f64 * h);
    }
    let mut value = sum * h;
    for _ in 0..12 {
        // Add midpoints.
        let mut mid = Complex64::new(0.0, 0.0);
        for m in 0..n {
            mid += f((m as f64 + 0.5) * h);
        }
        sum += mid;
        n *= 2;
        h *= 0.5;
        let next = sum * h;
        let delta = (next - value).norm();
        value = next;
        if delta <= 1e-14 * value.norm() {
            break;
        }
    }
    Complex64::new(0.0, -2.0 / PI) * value
}

/// First-kind Hankel function of order zero for `Im z >= 0`, `z != 0`.
pub fn hankel0_first(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("H0 has a logarithmic singularity at 0".into()));
    }
    if z.im < 0.0 {
        return Err(Error::Domain(format!("argument {z} lies in the lower half plane")));
    }
    if z.im == 0.0 && z.re > 0.0 {
        return Ok(Complex64::new(bessel_j0(z.re), bessel_y0(z.re)?));
    }
    let r = z.norm();
    let value = if r >= COMPLEX_ASYMPTOTIC_MIN {
        hankel_asymptotic(0, z)
    } else if z.im < SERIES_MAX_IMAG {
        hankel0_series(z)
    } else {
        hankel0_integral(z)
    };
    Ok(value)
}

/// Square root on the branch with `Re w >= 0`; the negative real axis maps to
/// the positive imaginary axis (continuity from the upper half plane).
pub fn branch_sqrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re < 0.0 {
        return Complex64::new(0.0, (-z.re).sqrt());
    }
    // The principal root already has Re >= 0; a signed zero imaginary part on
    // the negative axis is handled above.
    let w = z.sqrt();
    if w.re < 0.0 {
        -w
    } else {
        w
    }
}
