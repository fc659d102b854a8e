//! Transferred-source loads: locality, linearity and the nodal identity.

use num_complex::Complex64;
use pstddm::fem::{assemble_transfer_load, locality_defect, ComplexField, CutoffSpec, Orientation, TransferRule};
use pstddm::geometry::Axis;
use pstddm::harness::benchmark_grid;
use pstddm::pml::PmlProfile;
use pstddm::sweep::LayerDecomposition;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn setup() -> (PmlProfile, LayerDecomposition) {
    let p = PmlProfile::benchmark(5.0);
    let k = 2.0 * std::f64::consts::PI * 1.5;
    let grid = benchmark_grid(&p, k, 10.0, &[4], &[]).unwrap();
    let dec = LayerDecomposition::new(&grid, &p, k, 4, TransferRule::Nodal).unwrap();
    (p, dec)
}

fn random_field(grid: &pstddm::fem::StructuredGrid, seed: u64) -> ComplexField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = ComplexField::zeros(grid);
    for v in f.values.iter_mut() {
        *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    f.clear_boundary();
    f
}

/// Zero outside the closed strip `[lo, hi]` along x2.
fn restricted(f: &ComplexField, lo: f64, hi: f64) -> ComplexField {
    let g = &f.grid;
    let tol = 1e-9 * g.hy();
    let mut out = f.clone();
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            let y = g.y(j);
            if y < lo - tol || y > hi + tol {
                out.values[g.node_id(i, j)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// The plus transfer out of subproblem 1 into layer 2: with `cur` in
    /// layer 1, `next` in layer 2 and `u` arbitrary, `Psi + next` vanishes
    /// outside the layer-2 strip for the nodal rule.
    #[test]
    fn nodal_load_is_local(seed in 0u64..1_000_000) {
        let (p, dec) = setup();
        let sub = dec.subproblem(1);
        let part = dec.partition();
        let cutoff = CutoffSpec::new(part, 2, Orientation::Plus, Axis::X2);
        let u = random_field(&sub.grid, seed);
        let cur = restricted(&random_field(&sub.grid, seed + 1), f64::NEG_INFINITY, part.zeta(2));
        let next = restricted(&random_field(&sub.grid, seed + 2), part.zeta(2), part.zeta(3));
        let mut psi = assemble_transfer_load(sub, &p, &u, &cutoff, &cur, &next, TransferRule::Nodal).unwrap();
        psi.axpy(Complex64::new(1.0, 0.0), &next);
        let strip = sub.grid.rect().with_range(Axis::X2, (part.zeta(2), part.zeta(3)));
        prop_assert!(locality_defect(&psi, strip) <= 1e-13);
    }

    #[test]
    fn loads_are_linear(seed in 0u64..1_000_000, a_re in -2.0f64..2.0, a_im in -2.0f64..2.0) {
        let (p, dec) = setup();
        let sub = dec.subproblem(2);
        let cutoff = CutoffSpec::new(dec.partition(), 3, Orientation::Minus, Axis::X2);
        let a = Complex64::new(a_re, a_im);
        for rule in [TransferRule::Nodal, TransferRule::Quadrature] {
            let f: Vec<_> = (0..6).map(|s| random_field(&sub.grid, seed + s)).collect();
            let load = |u: &ComplexField, c: &ComplexField, n: &ComplexField| {
                assemble_transfer_load(sub, &p, u, &cutoff, c, n, rule).unwrap()
            };
            let combo = |x: &ComplexField, y: &ComplexField| { let mut z = x.clone(); z.axpy(a, y); z };
            let lhs = load(&combo(&f[0], &f[1]), &combo(&f[2], &f[3]), &combo(&f[4], &f[5]));
            let rhs = combo(&load(&f[0], &f[2], &f[4]), &load(&f[1], &f[3], &f[5]));
            let mut d = lhs.clone();
            d.axpy(Complex64::new(-1.0, 0.0), &rhs);
            prop_assert!(d.max_abs() <= 1e-10 * rhs.max_abs());
        }
    }
}

/// The nodal rule is `cur - M (beta u)` on interior nodes, checked against
/// an explicit matrix-vector product.
#[test]
fn nodal_rule_equals_current_minus_matrix_times_cut_field() {
    let (p, dec) = setup();
    let sub = dec.subproblem(2);
    let cutoff = CutoffSpec::new(dec.partition(), 3, Orientation::Plus, Axis::X2);
    let u = random_field(&sub.grid, 7);
    let cur = random_field(&sub.grid, 8);
    // Choose `next` so that u solves M u = cur + next.
    let mu = sub.dofs.scatter(&sub.grid, &sub.matrix.matvec(&sub.dofs.gather(&u)).unwrap());
    let next_consistent = {
        let mut n = mu.clone();
        n.axpy(Complex64::new(-1.0, 0.0), &cur);
        n
    };
    let psi = assemble_transfer_load(sub, &p, &u, &cutoff, &cur, &next_consistent, TransferRule::Nodal).unwrap();
    let beta = ComplexField::from_fn(&sub.grid, |x| Complex64::new(cutoff.value(x[1]), 0.0));
    let mut cut = u.clone();
    for (v, b) in cut.values.iter_mut().zip(&beta.values) {
        *v *= b;
    }
    let m_cut = sub.dofs.scatter(&sub.grid, &sub.matrix.matvec(&sub.dofs.gather(&cut)).unwrap());
    let g = &sub.grid;
    let mut worst = 0.0f64;
    for j in 1..g.ny() - 1 {
        for i in 1..g.nx() - 1 {
            let id = g.node_id(i, j);
            worst = worst.max((psi.values[id] - (cur.values[id] - m_cut.values[id])).norm());
        }
    }
    assert!(worst <= 1e-12 * m_cut.max_abs(), "{worst}");
}

/// Where beta is identically 1 the load reduces to `-next`, and to zero
/// when `next` vanishes as well.
#[test]
fn cutoff_of_one_leaves_only_the_next_source() {
    let (p, dec) = setup();
    let sub = dec.subproblem(1);
    let cutoff = CutoffSpec::new(dec.partition(), 2, Orientation::Plus, Axis::X2);
    let (a, _) = cutoff.band();
    let g = &sub.grid;
    // Keep u two cells clear of the band so every stencil sees beta = 1.
    let edge = a - 2.0 * g.hy();
    let u = restricted(&random_field(g, 3), f64::NEG_INFINITY, edge);
    let next = random_field(g, 5);
    let zero = ComplexField::zeros(g);
    let psi = assemble_transfer_load(sub, &p, &u, &cutoff, &zero, &zero, TransferRule::Nodal).unwrap();
    assert_eq!(psi.max_abs(), 0.0);
    let psi = assemble_transfer_load(sub, &p, &u, &cutoff, &zero, &next, TransferRule::Nodal).unwrap();
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            if g.y(j) < edge - 1e-12 {
                let id = g.node_id(i, j);
                assert_eq!(psi.values[id], -next.values[id]);
            }
        }
    }
}

#[test]
fn band_outside_the_grid_is_rejected() {
    let (p, dec) = setup();
    let sub = dec.subproblem(1);
    let cutoff = CutoffSpec::new(dec.partition(), 4, Orientation::Plus, Axis::X2);
    let z = ComplexField::zeros(&sub.grid);
    assert!(assemble_transfer_load(sub, &p, &z, &cutoff, &z, &z, TransferRule::Quadrature).is_err());
}

/// On a smooth field the two rules define the same functional up to the
/// discretization error, which shrinks under refinement. Loads are compared
/// through their action on a smooth test function.
#[test]
fn quadrature_and_nodal_rules_converge_together() {
    let p = PmlProfile::benchmark(5.0);
    let k = 2.0 * std::f64::consts::PI;
    let mut gaps = Vec::new();
    for q in [8.0, 16.0, 32.0] {
        let grid = benchmark_grid(&p, k, q, &[4], &[]).unwrap();
        let dec = LayerDecomposition::new(&grid, &p, k, 4, TransferRule::Nodal).unwrap();
        let sub = dec.subproblem(2);
        let cutoff = CutoffSpec::new(dec.partition(), 3, Orientation::Plus, Axis::X2);
        let u = ComplexField::from_fn(&sub.grid, |x| Complex64::new(0.0, k * x[0] + 0.5 * k * x[1]).exp());
        let zero = ComplexField::zeros(&sub.grid);
        let nodal = assemble_transfer_load(sub, &p, &u, &cutoff, &zero, &zero, TransferRule::Nodal).unwrap();
        let quad = assemble_transfer_load(sub, &p, &u, &cutoff, &zero, &zero, TransferRule::Quadrature).unwrap();
        let test = ComplexField::from_fn(&sub.grid, |x| Complex64::new((2.0 * x[0]).cos(), x[1]));
        let pair = |l: &ComplexField| -> Complex64 { l.values.iter().zip(&test.values).map(|(a, b)| a * b).sum() };
        gaps.push((pair(&nodal) - pair(&quad)).norm() / pair(&quad).norm());
    }
    assert!(gaps[2] < gaps[1] && gaps[1] < gaps[0], "{gaps:?}");
}
