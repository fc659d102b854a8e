//! The sweep preconditioner inside GMRES.

use num_complex::Complex64;
use pstddm::fem::TransferRule;
use pstddm::harness::{benchmark_grid, global_load, global_subproblem, source_term};
use pstddm::pml::PmlProfile;
use pstddm::precond::{fingerprint, PreconditionerContext};
use pstddm::sparse::{gmres, GmresOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn setup(q: f64) -> (PmlProfile, f64, pstddm::fem::StructuredGrid) {
    let p = PmlProfile::benchmark(5.0);
    let k = 2.0 * std::f64::consts::PI * 1.5;
    let grid = benchmark_grid(&p, k, q, &[1, 2, 4], &[]).unwrap();
    (p, k, grid)
}

fn random_vec(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

#[test]
fn application_is_linear() {
    let (p, k, grid) = setup(10.0);
    let ctx = PreconditionerContext::build(&grid, &p, k, 4, TransferRule::Nodal).unwrap();
    let n = ctx.dofs().len();
    let a = Complex64::new(-0.4, 2.1);
    for seed in 0..3 {
        let r = random_vec(n, seed);
        let s = random_vec(n, seed + 100);
        let rs: Vec<_> = r.iter().zip(&s).map(|(x, y)| x + a * y).collect();
        let lhs = ctx.apply(&rs).unwrap();
        let (zr, zs) = (ctx.apply(&r).unwrap(), ctx.apply(&s).unwrap());
        let scale = lhs.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let err = lhs.iter().zip(zr.iter().zip(&zs)).map(|(l, (x, y))| (l - (x + a * y)).norm()).fold(0.0, f64::max);
        assert!(err <= 1e-10 * scale, "{err} / {scale}");
    }
    assert_eq!(ctx.apply(&vec![Complex64::new(0.0, 0.0); n]).unwrap(), vec![Complex64::new(0.0, 0.0); n]);
}

#[test]
fn single_layer_context_is_exact() {
    let (p, k, grid) = setup(10.0);
    let ctx = PreconditionerContext::build(&grid, &p, k, 1, TransferRule::Nodal).unwrap();
    let sub = ctx.exact_subproblem().unwrap();
    let b = sub.dofs.gather(&global_load(&grid, &p, &|x| source_term(x, k)));
    let mut apply = |x: &[Complex64]| sub.matrix.matvec(x);
    let mut pre = |r: &[Complex64]| ctx.apply(r);
    let out = gmres(&mut apply, Some(&mut pre), &b, &GmresOptions::default()).unwrap();
    assert!(out.converged);
    assert_eq!(out.iterations, 1);
}

#[test]
fn preconditioner_beats_plain_gmres_without_refactorizing() {
    let (p, k, grid) = setup(10.0);
    let sub = global_subproblem(&grid, &p, k).unwrap();
    let b = sub.dofs.gather(&global_load(&grid, &p, &|x| source_term(x, k)));
    let opts = GmresOptions { tol: 1e-6, restart: 50, maxit: 600 };
    let mut apply = |x: &[Complex64]| sub.matrix.matvec(x);
    let plain = gmres(&mut apply, None, &b, &opts).unwrap();
    let ctx = PreconditionerContext::build(&grid, &p, k, 4, TransferRule::Nodal).unwrap();
    assert_eq!(ctx.factorizations(), 3);
    let mut pre = |r: &[Complex64]| ctx.apply(r);
    let out = gmres(&mut apply, Some(&mut pre), &b, &opts).unwrap();
    assert!(out.converged);
    assert!(out.iterations < plain.iterations, "{} vs {}", out.iterations, plain.iterations);
    // Every Arnoldi step and the update apply the context; none factorizes.
    assert!(ctx.applications() >= out.iterations);
    assert_eq!(ctx.factorizations(), 3);
}

#[test]
fn fingerprint_tracks_the_discrete_problem() {
    let (p, k, grid) = setup(10.0);
    let base = fingerprint(&grid, &p, k, 4, TransferRule::Nodal);
    assert_eq!(base, fingerprint(&grid, &p, k, 4, TransferRule::Nodal));
    assert_ne!(base, fingerprint(&grid, &p, k * 1.01, 4, TransferRule::Nodal));
    assert_ne!(base, fingerprint(&grid, &p, k, 2, TransferRule::Nodal));
    assert_ne!(base, fingerprint(&grid, &p, k, 4, TransferRule::Quadrature));
    assert_ne!(base, fingerprint(&grid, &PmlProfile::benchmark(6.0), k, 4, TransferRule::Nodal));
    let (_, _, fine) = setup(14.0);
    assert_ne!(base, fingerprint(&fine, &p, k, 4, TransferRule::Nodal));
    let ctx = PreconditionerContext::build(&grid, &p, k, 4, TransferRule::Nodal).unwrap();
    assert_eq!(ctx.fingerprint(), base);
}

#[test]
fn wrong_length_residual_is_rejected() {
    let (p, k, grid) = setup(10.0);
    let ctx = PreconditionerContext::build(&grid, &p, k, 2, TransferRule::Nodal).unwrap();
    assert!(ctx.apply(&[Complex64::new(1.0, 0.0); 3]).is_err());
    assert!(PreconditionerContext::build(&grid, &p, k, 0, TransferRule::Nodal).is_err());
}
