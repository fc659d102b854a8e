//! Algebraic properties of the layer and block sweeps.

use num_complex::Complex64;
use pstddm::blocks::BlockLayerSolver;
use pstddm::fem::{h1_seminorm_error, relative_h1_difference, ComplexField, CutoffSpec, Orientation, StructuredGrid, TransferRule};
use pstddm::geometry::Axis;
use pstddm::harness::{benchmark_grid, exact_gradient, solve_fe, source_term};
use pstddm::pml::PmlProfile;
use pstddm::sweep::{DirectPairSolver, LayerDecomposition};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const K2PI: f64 = 1.5;

fn k() -> f64 {
    2.0 * std::f64::consts::PI * K2PI
}

fn decomposition(layers: usize, blocks: &[usize]) -> (PmlProfile, LayerDecomposition) {
    let p = PmlProfile::benchmark(5.0);
    let grid = benchmark_grid(&p, k(), 10.0, &[layers], blocks).unwrap();
    let dec = LayerDecomposition::new(&grid, &p, k(), layers, TransferRule::Nodal).unwrap();
    (p, dec)
}

fn random_load(grid: &StructuredGrid, seed: u64) -> ComplexField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = ComplexField::zeros(grid);
    for v in f.values.iter_mut() {
        *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    f.clear_boundary();
    f
}

fn rel_diff(a: &ComplexField, b: &ComplexField) -> f64 {
    let mut d = a.clone();
    d.axpy(Complex64::new(-1.0, 0.0), b);
    d.max_abs() / b.max_abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn layer_solve_is_linear(seed in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0, layers in 2usize..5) {
        let (_, dec) = decomposition(layers, &[]);
        let solver = DirectPairSolver::new(&dec.split).unwrap();
        let a = Complex64::new(re, im);
        let f = random_load(dec.grid(), seed);
        let g = random_load(dec.grid(), seed.wrapping_add(1));
        let mut fg = f.clone();
        fg.axpy(a, &g);
        let solve = |l: &ComplexField| dec.solve(&solver, &dec.split_nodal_load(l).unwrap()).unwrap().0;
        let mut expected = solve(&f);
        expected.axpy(a, &solve(&g));
        prop_assert!(rel_diff(&solve(&fg), &expected) <= 1e-10);
    }
}

#[test]
fn block_solve_is_linear() {
    let (_, dec) = decomposition(3, &[3]);
    let solver = BlockLayerSolver::new(&dec, 3).unwrap();
    let a = Complex64::new(0.3, -1.7);
    let f = random_load(dec.grid(), 1);
    let g = random_load(dec.grid(), 2);
    let mut fg = f.clone();
    fg.axpy(a, &g);
    let solve = |l: &ComplexField| dec.solve(&solver, &dec.split_nodal_load(l).unwrap()).unwrap().0;
    let mut expected = solve(&f);
    expected.axpy(a, &solve(&g));
    assert!(rel_diff(&solve(&fg), &expected) <= 1e-10);
}

#[test]
fn zero_sources_give_exactly_zero() {
    let (_, dec) = decomposition(4, &[3]);
    let zero = vec![ComplexField::zeros(dec.grid()); 4];
    let layer = DirectPairSolver::new(&dec.split).unwrap();
    let (v, fields) = dec.solve(&layer, &zero).unwrap();
    assert_eq!(v.max_abs(), 0.0);
    assert!(fields.plus.iter().chain(&fields.minus).all(|u| u.max_abs() == 0.0));
    let (v, _) = dec.solve(&BlockLayerSolver::new(&dec, 3).unwrap(), &zero).unwrap();
    assert_eq!(v.max_abs(), 0.0);
}

fn mirror_gap(plus: &ComplexField, minus: &ComplexField) -> f64 {
    let (gp, gm) = (&plus.grid, &minus.grid);
    assert_eq!((gp.nx(), gp.ny()), (gm.nx(), gm.ny()));
    let mut worst = 0.0f64;
    for j in 0..gp.ny() {
        let jm = gm.local_index(Axis::X2, -gp.y(j)).expect("mirrored grid line");
        for a in 0..gp.nx() {
            worst = worst.max((plus.at(a, j) - minus.at(a, jm)).norm());
        }
    }
    worst / plus.max_abs()
}

/// A source in the bottom layer swept upward against its reflection in the
/// top layer swept downward. The first solves are exact mirror images. Past
/// the first transfer they are not: the downward cutoff is `1 - beta^+`,
/// and the quartic transition is not symmetric about the middle of its
/// band, so the reflected upward cutoff differs from the downward one.
#[test]
fn sweeps_mirror_each_other_up_to_the_cutoff_shape() {
    let layers = 4;
    let (_, dec) = decomposition(layers, &[]);
    let solver = DirectPairSolver::new(&dec.split).unwrap();
    let kk = k();
    // The benchmark source is even in x2, so its bottom and top layer
    // restrictions are reflections of each other.
    let all = dec.split_volume_source(&|x| source_term(x, kk));
    let zero = ComplexField::zeros(dec.grid());
    let mut bottom = vec![zero.clone(); layers];
    bottom[0] = all[0].clone();
    let mut top = vec![zero; layers];
    top[layers - 1] = all[layers - 1].clone();
    let up = dec.sweep(&solver, &bottom).unwrap();
    let down = dec.sweep(&solver, &top).unwrap();
    let gap = |i: usize| mirror_gap(&up.plus[i - 1], &down.minus[layers - 1 - i]);
    assert!(gap(1) <= 1e-10, "{}", gap(1));
    for i in 2..layers {
        assert!(gap(i) < 0.2, "u_{i}^+: {}", gap(i));
    }

    let part = dec.partition();
    let up_cut = CutoffSpec::new(part, 2, Orientation::Plus, Axis::X2);
    let down_cut = CutoffSpec::new(part, layers - 1, Orientation::Minus, Axis::X2);
    let (a, b) = up_cut.band();
    let mid = 0.5 * (a + b);
    assert_eq!(up_cut.value(mid), 0.5625);
    assert_eq!(down_cut.value(-mid), 0.4375);
}

#[test]
fn two_layers_reproduce_the_direct_solution() {
    let (p, dec) = decomposition(2, &[]);
    let solver = DirectPairSolver::new(&dec.split).unwrap();
    let kk = k();
    let f = |x: [f64; 2]| source_term(x, kk);
    let (v, _) = dec.solve(&solver, &dec.split_volume_source(&f)).unwrap();
    let u = solve_fe(dec.grid(), &p, kk, &f).unwrap();
    assert!(rel_diff(&v, &u) <= 1e-10);
}

#[test]
fn one_block_is_the_layer_solver() {
    let (_, dec) = decomposition(4, &[]);
    let kk = k();
    let loads = dec.split_volume_source(&|x| source_term(x, kk));
    let (layer, _) = dec.solve(&DirectPairSolver::new(&dec.split).unwrap(), &loads).unwrap();
    let blocks = BlockLayerSolver::new(&dec, 1).unwrap();
    assert_eq!(blocks.factorization_count(), 3);
    let (block, _) = dec.solve(&blocks, &loads).unwrap();
    assert_eq!(layer.values, block.values);
}

#[test]
fn transferred_sources_stay_in_their_layer() {
    for layers in [3, 5] {
        let (p, dec) = decomposition(layers, &[3]);
        let kk = k();
        let loads = dec.split_volume_source(&|x| source_term(x, kk));
        for solver in [
            Box::new(DirectPairSolver::new(&dec.split).unwrap()) as Box<dyn pstddm::sweep::PairSolver>,
            Box::new(BlockLayerSolver::new(&dec, 3).unwrap()),
        ] {
            let (v, fields) = dec.solve(solver.as_ref(), &loads).unwrap();
            assert_eq!(fields.transfers.len(), 2 * (layers - 2));
            for t in &fields.transfers {
                assert!(t.locality_defect <= 1e-13, "defect {}", t.locality_defect);
            }
            let u = solve_fe(dec.grid(), &p, kk, &|x| source_term(x, kk)).unwrap();
            assert!(relative_h1_difference(&v, &u, p.inner_box()).unwrap() < 0.5);
        }
    }
}

#[test]
fn block_count_barely_moves_the_error() {
    // Desk-scale grid aligned for both block counts.
    let k = 2.0 * std::f64::consts::PI * 2.0;
    let p = PmlProfile::benchmark(5.0);
    let grid = benchmark_grid(&p, k, 16.0, &[3], &[2, 3]).unwrap();
    let dec = LayerDecomposition::new(&grid, &p, k, 3, TransferRule::Nodal).unwrap();
    let loads = dec.split_volume_source(&|x| source_term(x, k));
    let errors: Vec<f64> = [2, 3]
        .iter()
        .map(|&n| {
            let (u, _) = dec.solve(&BlockLayerSolver::new(&dec, n).unwrap(), &loads).unwrap();
            h1_seminorm_error(&u, &|x| exact_gradient(x, k), p.inner_box()).unwrap()
        })
        .collect();
    let spread = (errors[0] - errors[1]).abs() / errors[0].min(errors[1]);
    assert!(spread < 0.15, "errors {errors:?}, spread {spread}");
}
