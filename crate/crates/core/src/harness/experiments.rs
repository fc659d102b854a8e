//! Experiment drivers behind the CLI modes.

use std::time::Instant;

use num_complex::Complex64;

use super::benchmark::{exact_gradient, exact_solution, source_term};
use super::config::{ExperimentConfig, Mode};
use super::fe::{global_load, global_subproblem};
use super::report::ExperimentRecord;
use super::setup::benchmark_grid;
use crate::blocks::BlockLayerSolver;
use crate::error::{Error, Result};
use crate::fem::{h1_seminorm_error, relative_h1_difference, ComplexField, StructuredGrid};
use crate::pml::PmlProfile;
use crate::precond::PreconditionerContext;
use crate::sparse::{gmres, GmresOptions, GmresOutcome};
use crate::sweep::{DirectPairSolver, LayerDecomposition, PairSolver};

/// The benchmark problem a configuration describes.
#[derive(Clone, Debug)]
pub struct Problem {
    pub profile: PmlProfile,
    pub k: f64,
    pub grid: StructuredGrid,
}

impl Problem {
    /// The grid is aligned with the configured layers, and with the blocks in
    /// block mode, so that all modes of one configuration share a grid.
    pub fn new(config: &ExperimentConfig) -> Result<Self> {
        let profile = config.profile()?;
        let k = config.k();
        let blocks: Vec<usize> = match config.mode {
            Mode::PstddmBlocks => vec![config.block_count()],
            _ => vec![],
        };
        let grid = benchmark_grid(&profile, k, config.q, &[config.layers], &blocks)?;
        Ok(Problem { profile, k, grid })
    }

    pub fn source(&self, x: [f64; 2]) -> Complex64 {
        source_term(x, self.k)
    }

    /// Relative H1-seminorm error on the unstretched box.
    pub fn error(&self, u: &ComplexField) -> Result<f64> {
        let k = self.k;
        h1_seminorm_error(u, &|x| exact_gradient(x, k), self.profile.inner_box())
    }

    pub fn interpolant(&self) -> ComplexField {
        let k = self.k;
        ComplexField::from_fn(&self.grid, |x| exact_solution(x, k))
    }

    pub fn solve_fe(&self) -> Result<ComplexField> {
        let k = self.k;
        super::fe::solve_fe(&self.grid, &self.profile, k, &|x| source_term(x, k))
    }

    /// The swept solution with `blocks` blocks per layer (`None` for direct
    /// layer solves). Needs at least two layers.
    pub fn solve_pstddm(&self, config: &ExperimentConfig, blocks: Option<usize>) -> Result<PstddmRun> {
        let t0 = Instant::now();
        let dec = LayerDecomposition::new(&self.grid, &self.profile, self.k, config.layers, config.transfer_rule)?;
        let (solver, factorizations): (Box<dyn PairSolver>, usize) = match blocks {
            None => {
                let s = DirectPairSolver::new(&dec.split)?;
                let n = s.factorization_count();
                (Box::new(s), n)
            }
            Some(b) => {
                let s = BlockLayerSolver::new(&dec, b)?;
                let n = s.factorization_count();
                (Box::new(s), n)
            }
        };
        let setup_ms = ms(t0);
        let t1 = Instant::now();
        let k = self.k;
        let loads = dec.split_volume_source(&|x| source_term(x, k));
        let (field, fields) = dec.solve(solver.as_ref(), &loads)?;
        let max_locality_defect = fields
            .transfers
            .iter()
            .map(|t| t.locality_defect)
            .fold(0.0, f64::max);
        Ok(PstddmRun {
            field,
            factorizations,
            setup_ms,
            sweep_ms: ms(t1),
            max_locality_defect,
        })
    }
}

pub struct PstddmRun {
    pub field: ComplexField,
    pub factorizations: usize,
    pub setup_ms: f64,
    pub sweep_ms: f64,
    pub max_locality_defect: f64,
}

/// A record plus what does not fit in the CSV row.
#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub record: ExperimentRecord,
    pub grid_size: [usize; 2],
    pub dof: usize,
    /// Relative H1 difference between the swept and the FE solution on the box.
    pub difference_to_fe: Option<f64>,
    pub factorizations: Option<usize>,
    pub max_locality_defect: Option<f64>,
    pub plain: Option<GmresOutcome>,
    pub preconditioned: Option<GmresOutcome>,
    pub warnings: Vec<String>,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn blank_record(config: &ExperimentConfig) -> ExperimentRecord {
    ExperimentRecord {
        mode: config.mode,
        k: config.k(),
        q: config.q,
        layers: config.layers,
        blocks: config.blocks,
        gamma0: config.gamma0,
        e_i: None,
        e_f: None,
        e_s: None,
        iters_plain: None,
        iters_precond: None,
        wall_ms: 0.0,
    }
}

fn blank_report(config: &ExperimentConfig, problem: &Problem, warnings: Vec<String>) -> ExperimentReport {
    let g = &problem.grid;
    ExperimentReport {
        record: blank_record(config),
        grid_size: [g.nx(), g.ny()],
        dof: (g.nx() - 2) * (g.ny() - 2),
        difference_to_fe: None,
        factorizations: None,
        max_locality_defect: None,
        plain: None,
        preconditioned: None,
        warnings,
    }
}

fn require_mode(config: &ExperimentConfig, allowed: &[Mode]) -> Result<()> {
    if allowed.contains(&config.mode) {
        Ok(())
    } else {
        Err(Error::Config(format!("this driver does not run mode {}", config.mode.as_str())))
    }
}

/// Dispatches on `config.mode`.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    match config.mode {
        Mode::Fe => run_fe_baseline(config),
        Mode::PstddmLayers | Mode::PstddmBlocks => run_pstddm(config),
        Mode::GmresStudy => run_gmres_study(config),
    }
}

pub fn run_fe_baseline(config: &ExperimentConfig) -> Result<ExperimentReport> {
    require_mode(config, &[Mode::Fe])?;
    let warnings = config.validate()?;
    let t0 = Instant::now();
    let problem = Problem::new(config)?;
    let mut report = blank_report(config, &problem, warnings);
    report.record.e_i = Some(problem.error(&problem.interpolant())?);
    report.record.e_f = Some(problem.error(&problem.solve_fe()?)?);
    report.factorizations = Some(1);
    report.record.wall_ms = ms(t0);
    Ok(report)
}

/// Layer or block sweep next to an FE solve on the same grid. A single
/// layer is the FE solve itself.
pub fn run_pstddm(config: &ExperimentConfig) -> Result<ExperimentReport> {
    require_mode(config, &[Mode::PstddmLayers, Mode::PstddmBlocks])?;
    let warnings = config.validate()?;
    let t0 = Instant::now();
    let problem = Problem::new(config)?;
    let mut report = blank_report(config, &problem, warnings);
    report.record.e_i = Some(problem.error(&problem.interpolant())?);
    let fe = problem.solve_fe()?;
    let e_f = problem.error(&fe)?;
    report.record.e_f = Some(e_f);
    if config.layers == 1 {
        report.record.e_s = Some(e_f);
        report.difference_to_fe = Some(0.0);
        report.factorizations = Some(1);
    } else {
        let blocks = match config.mode {
            Mode::PstddmBlocks => Some(config.block_count()),
            _ => None,
        };
        let run = problem.solve_pstddm(config, blocks)?;
        report.record.e_s = Some(problem.error(&run.field)?);
        report.difference_to_fe = Some(relative_h1_difference(&run.field, &fe, problem.profile.inner_box())?);
        report.factorizations = Some(run.factorizations);
        report.max_locality_defect = Some(run.max_locality_defect);
    }
    report.record.wall_ms = ms(t0);
    Ok(report)
}

/// Plain and preconditioned GMRES on the same global system. Running out of
/// iterations is reported in the outcome, not as an error.
pub fn run_gmres_study(config: &ExperimentConfig) -> Result<ExperimentReport> {
    require_mode(config, &[Mode::GmresStudy])?;
    let warnings = config.validate()?;
    let t0 = Instant::now();
    let problem = Problem::new(config)?;
    let mut report = blank_report(config, &problem, warnings);
    let (grid, profile, k) = (&problem.grid, &problem.profile, problem.k);
    let sub = global_subproblem(grid, profile, k)?;
    let b = sub.dofs.gather(&global_load(grid, profile, &|x| source_term(x, k)));
    let opts = GmresOptions {
        tol: config.tol,
        restart: config.restart,
        maxit: config.maxit,
    };
    let mut apply = |x: &[Complex64]| sub.matrix.matvec(x);
    let plain = gmres(&mut apply, None, &b, &opts)?;
    let ctx = PreconditionerContext::build(grid, profile, k, config.layers, config.transfer_rule)?;
    let mut precond = |r: &[Complex64]| ctx.apply(r);
    let pre = gmres(&mut apply, Some(&mut precond), &b, &opts)?;
    report.record.e_i = Some(problem.error(&problem.interpolant())?);
    // The preconditioned iterate solves the global FE system to `tol`.
    report.record.e_f = Some(problem.error(&sub.dofs.scatter(grid, &pre.x))?);
    report.record.iters_plain = Some(plain.iterations);
    report.record.iters_precond = Some(pre.iterations);
    report.factorizations = Some(ctx.factorizations());
    report.plain = Some(plain);
    report.preconditioned = Some(pre);
    report.record.wall_ms = ms(t0);
    Ok(report)
}
