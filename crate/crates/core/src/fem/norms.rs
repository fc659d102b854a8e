//! H^1-seminorms over grid-aligned regions, integrated elementwise with 3x3
//! Gauss points. (Two-point rules sample the Q1 gradient at its
//! superconvergence points and would hide the first-order error.)

use num_complex::Complex64;

use super::assembly::{shape, CORNERS};
use super::grid::{ComplexField, StructuredGrid};
use super::quadrature::{GAUSS3, GAUSS3_W};
use crate::error::{Error, Result};
use crate::geometry::{Axis, Rect};

pub type GradientFn<'a> = dyn Fn([f64; 2]) -> [Complex64; 2] + 'a;

/// Element index ranges `[lo, hi)` covering `region`, which must be aligned.
fn element_span(grid: &StructuredGrid, region: Rect) -> Result<[(usize, usize); 2]> {
    let mut span = [(0, 0); 2];
    for axis in [Axis::X1, Axis::X2] {
        let (a, b) = region.range(axis);
        let lo = grid
            .local_index(axis, a)
            .ok_or_else(|| Error::Grid(format!("region edge {a} is not a grid line of the field's grid")))?;
        let hi = grid
            .local_index(axis, b)
            .ok_or_else(|| Error::Grid(format!("region edge {b} is not a grid line of the field's grid")))?;
        if hi <= lo {
            return Err(Error::Grid(format!("empty region {region:?}")));
        }
        span[axis.index()] = (lo, hi);
    }
    Ok(span)
}

/// `sum_q w_q |g(x_q) - grad u_h(x_q)|^2` over the region; `u_h` may be absent.
fn integrate(u_h: Option<&ComplexField>, grid: &StructuredGrid, exact: Option<&GradientFn>, region: Rect) -> Result<f64> {
    let span = element_span(grid, region)?;
    let (hx, hy) = (grid.hx(), grid.hy());
    let mut total = 0.0;
    for ey in span[1].0..span[1].1 {
        for ex in span[0].0..span[0].1 {
            let ue: Option<Vec<Complex64>> =
                u_h.map(|u| CORNERS.iter().map(|&(ci, cj)| u.at(ex + ci, ey + cj)).collect());
            for (qt, &t) in GAUSS3.iter().enumerate() {
                for (qs, &s) in GAUSS3.iter().enumerate() {
                    let w = GAUSS3_W[qs] * GAUSS3_W[qt] * hx * hy;
                    let mut g = [Complex64::new(0.0, 0.0); 2];
                    if let Some(ue) = &ue {
                        let (_, ds, dt) = shape(s, t);
                        for n in 0..4 {
                            g[0] += ue[n] * (ds[n] / hx);
                            g[1] += ue[n] * (dt[n] / hy);
                        }
                    }
                    if let Some(f) = exact {
                        let e = f([grid.x(ex) + s * hx, grid.y(ey) + t * hy]);
                        g[0] -= e[0];
                        g[1] -= e[1];
                    }
                    total += w * (g[0].norm_sqr() + g[1].norm_sqr());
                }
            }
        }
    }
    Ok(total.sqrt())
}

pub fn h1_seminorm(u: &ComplexField, region: Rect) -> Result<f64> {
    integrate(Some(u), &u.grid, None, region)
}

/// `|grad u|_{L^2(region)}` of an exact gradient, with the same quadrature.
pub fn exact_h1_seminorm(grid: &StructuredGrid, exact: &GradientFn, region: Rect) -> Result<f64> {
    integrate(None, grid, Some(exact), region)
}

/// `|u_h - u|_{H^1(region)} / |u|_{H^1(region)}` for an exact solution given by its gradient.
pub fn h1_seminorm_error(u_h: &ComplexField, exact: &GradientFn, region: Rect) -> Result<f64> {
    let num = integrate(Some(u_h), &u_h.grid, Some(exact), region)?;
    let den = exact_h1_seminorm(&u_h.grid, exact, region)?;
    if den == 0.0 {
        return Err(Error::Domain("exact solution has zero H1 seminorm on the region".into()));
    }
    Ok(num / den)
}

/// `|a - b|_{H^1(region)} / |b|_{H^1(region)}` for two fields on the same grid.
pub fn relative_h1_difference(a: &ComplexField, b: &ComplexField, region: Rect) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::Grid("fields live on different grids".into()));
    }
    let mut d = a.clone();
    d.axpy(Complex64::new(-1.0, 0.0), b);
    let den = h1_seminorm(b, region)?;
    if den == 0.0 {
        return Err(Error::Domain("reference field has zero H1 seminorm on the region".into()));
    }
    Ok(h1_seminorm(&d, region)? / den)
}
