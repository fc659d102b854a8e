//! Gauss-Legendre rules on the unit interval.

const INV_SQRT3: f64 = 0.577_350_269_189_625_8;

pub const GAUSS2: [f64; 2] = [0.5 * (1.0 - INV_SQRT3), 0.5 * (1.0 + INV_SQRT3)];
pub const GAUSS2_W: f64 = 0.5;

const SQRT_3_5: f64 = 0.774_596_669_241_483_4;

pub const GAUSS3: [f64; 3] = [0.5 * (1.0 - SQRT_3_5), 0.5, 0.5 * (1.0 + SQRT_3_5)];
pub const GAUSS3_W: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];
