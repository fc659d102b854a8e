use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pstddm::harness::{report::write_outputs, run, ExperimentConfig, ExperimentReport, Mode};
use pstddm::Error;

#[derive(Parser)]
#[command(name = "pstddm", version, about = "Source transfer domain decomposition for the 2-D Helmholtz equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment. Flags override values from the config file.
    Solve {
        #[arg(long)]
        config: Option<PathBuf>,
        /// fe, pstddm-layers, pstddm-blocks or gmres-study
        #[arg(long)]
        mode: Option<String>,
        #[arg(long = "k-over-2pi")]
        k_over_2pi: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        layers: Option<usize>,
        #[arg(long)]
        blocks: Option<usize>,
        #[arg(long)]
        gamma0: Option<f64>,
        /// CSV file for the result record
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_configuration() { EXIT_CONFIG } else { EXIT_SOLVER })
}

fn print_summary(r: &ExperimentReport) {
    let rec = &r.record;
    println!("mode        {}", rec.mode.as_str());
    println!("grid        {} x {} ({} unknowns)", r.grid_size[0], r.grid_size[1], r.dof);
    let show = |name: &str, v: Option<f64>| {
        if let Some(v) = v {
            println!("{name:<11} {v:.6e}");
        }
    };
    show("e_i", rec.e_i);
    show("e_f", rec.e_f);
    show("e_s", rec.e_s);
    show("|v - u_h|", r.difference_to_fe);
    if let Some(n) = r.factorizations {
        println!("factorized  {n}");
    }
    for (name, outcome) in [("plain", &r.plain), ("precond", &r.preconditioned)] {
        if let Some(o) = outcome {
            let last = o.residuals.last().copied().unwrap_or(0.0);
            let state = if o.converged { "converged" } else { "not converged" };
            println!("{name:<11} {} iterations, residual {last:.3e}, {state}", o.iterations);
        }
    }
    println!("wall        {:.0} ms", rec.wall_ms);
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Solve {
        config,
        mode,
        k_over_2pi,
        q,
        layers,
        blocks,
        gamma0,
        out,
    } = cli.command;

    let mut cfg = match &config {
        Some(path) => match ExperimentConfig::load(path) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        },
        None => ExperimentConfig::default(),
    };
    if let Some(m) = mode {
        match m.parse::<Mode>() {
            Ok(m) => cfg.mode = m,
            Err(e) => return fail(&e),
        }
    }
    if let Some(v) = k_over_2pi {
        cfg.k_over_2pi = v;
    }
    if let Some(v) = q {
        cfg.q = v;
    }
    if let Some(v) = layers {
        cfg.layers = v;
    }
    if blocks.is_some() {
        cfg.blocks = blocks;
    }
    if let Some(v) = gamma0 {
        cfg.gamma0 = v;
    }
    if out.is_some() {
        cfg.output = out;
    }

    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    print_summary(&report);
    if let Some(path) = &cfg.output {
        let histories = match (&report.plain, &report.preconditioned) {
            (Some(p), Some(q)) => Some((p.residuals.as_slice(), q.residuals.as_slice())),
            _ => None,
        };
        match write_outputs(path, &report.record, &cfg, histories) {
            Ok(files) => {
                for f in files {
                    println!("wrote       {}", f.display());
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_SOLVER);
            }
        }
    }
    ExitCode::SUCCESS
}
