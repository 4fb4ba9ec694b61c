use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rotwave::config::{load_config, Experiment, SweepConfig, MODULES};
use rotwave::emit::emit_outputs;
use rotwave::identities::run_identities;
use rotwave::sweep::run_sweep;
use rotwave::verify::{run_verify, Report};
use rotwave::{HarnessError, Result};

#[derive(Parser)]
#[command(name = "rotwave", version, about = "Fast-rotation experiments on the sphere, shell and box")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the operator property suite.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(MODULES))]
        module: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Zonal-defect sweep of the barotropic solver.
    SphereSweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Wave-defect sweep of the box MHD solver.
    MhdSweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shell identity checks.
    Identities {
        #[arg(long)]
        config: PathBuf,
    },
}

fn print_report(r: &Report) {
    for c in &r.checks {
        println!("{}", c.line());
    }
}

fn sweep(path: PathBuf, out: Option<PathBuf>, want: Experiment) -> Result<()> {
    let cfg: SweepConfig = load_config(&path)?;
    if cfg.experiment != want {
        return Err(HarnessError::Config(format!(
            "experiment: {} holds a {:?} config, expected {want:?}",
            path.display(),
            cfg.experiment
        )));
    }
    let res = run_sweep(&cfg)?;
    let dir = out.unwrap_or_else(|| cfg.output_dir.clone());
    for p in emit_outputs(&res, &cfg, &dir)? {
        println!("wrote {}", p.display());
    }
    if let Some(f) = &res.fit {
        println!("{}: slope {:.4}, intercept {:.4}, r^2 {:.5}", res.rows.primary_name(), f.slope, f.intercept, f.r_squared);
    }
    for s in &res.secondary {
        println!("{}: slope {:.4}, r^2 {:.5}", s.quantity, s.fit.slope, s.fit.r_squared);
    }
    match res.failures.first() {
        Some(f) => Err(HarnessError::Partial {
            failed: res.failures.len(),
            total: cfg.epsilons.len(),
            first: format!("eps = {}: {}", f.epsilon, f.message),
            code: f.exit_code,
        }),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Verify { module, seed } => {
            let r = run_verify(module.as_deref(), seed)?;
            print_report(&r);
            r.into_result().map(|_| ())
        }
        Command::SphereSweep { config, out } => sweep(config, out, Experiment::Sphere),
        Command::MhdSweep { config, out } => sweep(config, out, Experiment::Mhd),
        Command::Identities { config } => {
            let cfg = load_config(&config)?;
            let p = cfg
                .identities
                .ok_or_else(|| HarnessError::Config("identities: section required".into()))?;
            let r = run_identities(&p)?;
            print_report(&r);
            r.into_result().map(|_| ())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
