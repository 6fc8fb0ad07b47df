use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isobuckle::driver::{export_modes, load_config, run_analysis, sweep, ModelConfig, ResultsTable, SweepAxis};
use isobuckle::error::Error;

/// Thermal buckling of laminated plates with cutouts and curvilinear stiffeners.
#[derive(Parser)]
#[command(name = "isobuckle", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Model description (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the plate refinement level.
    #[arg(long)]
    refinement: Option<usize>,
    /// Override the number of modes.
    #[arg(long)]
    modes: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one configuration and write results.csv and eigenvalues.csv.
    Run(Common),
    /// Solve once per axis value and write sweep_<axis>.csv.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// radius, theta, refinement, stiffener-refinement, gamma or delta-eps.
        #[arg(long)]
        axis: String,
        /// Comma-separated axis values.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Vec<f64>,
    },
    /// Solve and write mode shapes as CSV and VTK.
    ExportModes {
        #[command(flatten)]
        common: Common,
        /// Samples per side, overriding the config.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Check the configuration without solving.
    Validate(Common),
}

const VALIDATION: u8 = 2;
const SOLVER: u8 = 3;

fn report(e: &Error) {
    eprintln!("error: {e}");
    if let Error::Validation(list) = e.root() {
        for f in list {
            eprintln!("  {f}");
        }
    }
}

fn load(common: &Common) -> Result<ModelConfig, ExitCode> {
    let mut cfg = load_config(&common.config).map_err(|e| {
        report(&e);
        ExitCode::from(VALIDATION)
    })?;
    if let Some(r) = common.refinement {
        cfg.plate.refinement = r;
    }
    if let Some(m) = common.modes {
        cfg.analysis.n_modes = m;
    }
    let errs = cfg.validate();
    if !errs.is_empty() {
        report(&Error::Validation(errs));
        return Err(ExitCode::from(VALIDATION));
    }
    Ok(cfg)
}

fn solver_failure(e: Error) -> ExitCode {
    report(&e);
    match e.root() {
        Error::Validation(_) => ExitCode::from(VALIDATION),
        _ => ExitCode::from(SOLVER),
    }
}

fn ensure_dir(dir: &Path) -> Result<(), ExitCode> {
    std::fs::create_dir_all(dir).map_err(|e| solver_failure(Error::io(dir, e)))
}

fn run(common: &Common, grid: Option<usize>, modes: bool) -> Result<(), ExitCode> {
    let cfg = load(common)?;
    let out = run_analysis(&cfg).map_err(solver_failure)?;
    ensure_dir(&common.out)?;
    let table = ResultsTable {
        rows: vec![out.row.clone()],
    };
    table.write_csv(&common.out.join("results.csv")).map_err(solver_failure)?;
    out.write_eigenvalues(&common.out.join("eigenvalues.csv")).map_err(solver_failure)?;
    for (m, l, s) in out.eigenvalues() {
        println!("mode {m}: lambda = {l:.6e}, lambda* = {s:.6}");
    }
    println!(
        "{} DOF ({} extra), static {:.3} s, eigen {:.3} s",
        out.row.n_dof, out.row.extra_dof, out.row.static_seconds, out.row.eigen_seconds
    );
    if modes {
        let grid = grid.unwrap_or(cfg.output.mode_grid);
        let written = export_modes(
            &out.model.discretization,
            &out.analysis.solution.modes,
            grid,
            &cfg.output.formats,
            &common.out.join("modes"),
        )
        .map_err(solver_failure)?;
        println!("wrote {} mode files to {}", written.len(), common.out.join("modes").display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(c) => run(c, None, false),
        Command::ExportModes { common, grid } => run(common, *grid, true),
        Command::Validate(c) => load(c).map(|cfg| {
            println!("{}: ok", if cfg.name.is_empty() { "config" } else { &cfg.name });
        }),
        Command::Sweep { common, axis, values } => (|| {
            let axis: SweepAxis = axis.parse().map_err(|e: Error| {
                report(&e);
                ExitCode::from(VALIDATION)
            })?;
            let cfg = load(common)?;
            let table = sweep(&cfg, axis, values);
            ensure_dir(&common.out)?;
            let name = format!("sweep_{}.csv", format!("{axis:?}").to_lowercase());
            table.write_csv(&common.out.join(&name)).map_err(solver_failure)?;
            for r in &table.rows {
                match r.lambda_star {
                    Some(l) if r.is_ok() => println!("{:>10} lambda* = {l:.6}", r.parameter.unwrap_or(f64::NAN)),
                    _ => println!("{:>10} {}", r.parameter.unwrap_or(f64::NAN), r.status),
                }
            }
            if !table.rows.is_empty() && table.rows.iter().all(|r| !r.is_ok()) {
                return Err(ExitCode::from(SOLVER));
            }
            Ok(())
        })(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
