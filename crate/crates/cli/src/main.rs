use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hermite_dg::config::{load_config, ScenarioId, SimConfig};
use hermite_dg::diagnostics::spectrum_2d;
use hermite_dg::driver::output::{read_field_history, write_spectrum};
use hermite_dg::driver::scenarios::{apply_overrides, preset, Overrides};
use hermite_dg::driver::{initial_state, run_simulation, CsvSink, RunError, Sink};
use hermite_dg::integrators::Method;
use hermite_dg::{ConfigError, IoError};

const EXIT_CONFIG: u8 = 2;
const EXIT_STEP: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "hdg", version, about = "Hermite-DG Vlasov-Maxwell solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write CSV output.
    Run {
        #[command(flatten)]
        select: Select,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Print the resolved configuration as TOML.
    Config {
        #[command(flatten)]
        select: Select,
    },
    /// ω-k spectrum of a recorded E_y history.
    Spectrum {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Select {
    /// TOML configuration file.
    #[arg(long, conflicts_with = "scenario")]
    config: Option<PathBuf>,
    /// Built-in preset: whistler, xmode or orszag-tang.
    #[arg(long)]
    scenario: Option<ScenarioId>,
    #[arg(long)]
    method: Option<Method>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Cells along every resolved axis.
    #[arg(long)]
    cells: Option<usize>,
    /// Hermite orders as `nx,ny,nz`.
    #[arg(long, value_parser = parse_orders)]
    hermite: Option<[usize; 3]>,
    #[arg(long)]
    dg_degree: Option<usize>,
    /// Diagnostics every this many steps.
    #[arg(long)]
    cadence: Option<usize>,
    /// Full-resolution Orszag-Tang grid.
    #[arg(long)]
    paper_scale: bool,
}

fn parse_orders(s: &str) -> Result<[usize; 3], String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected three comma-separated orders".to_string())
}

enum Failure {
    Config(ConfigError),
    Step(String),
    Io(IoError),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Step(_) => EXIT_STEP,
            Failure::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(e) => write!(f, "configuration error: {e}"),
            Failure::Step(e) => write!(f, "time step failed: {e}"),
            Failure::Io(e) => write!(f, "I/O error: {e}"),
        }
    }
}

fn resolve(sel: &Select) -> Result<SimConfig, Failure> {
    let o = Overrides {
        cells: sel.cells,
        hermite_orders: sel.hermite,
        dg_degree: sel.dg_degree,
        dt: sel.dt,
        t_end: sel.t_end,
        method: sel.method,
        cadence: sel.cadence,
        paper_scale: sel.paper_scale,
    };
    let cfg = match (&sel.config, sel.scenario) {
        (Some(path), _) => apply_overrides(load_config(path).map_err(Failure::Config)?, &o),
        (None, Some(id)) => preset(id, &o).map_err(Failure::Config)?,
        (None, None) => {
            return Err(Failure::Config(ConfigError::invalid(
                "scenario",
                "pass --config <file> or --scenario <name>",
            )))
        }
    };
    cfg.validate().map_err(Failure::Config)?;
    Ok(cfg)
}

fn run(sel: &Select, out_dir: &Path) -> Result<(), Failure> {
    let cfg = resolve(sel)?;
    let state = initial_state(&cfg).map_err(Failure::Config)?;
    let mut sink = CsvSink::create(out_dir, &cfg).map_err(Failure::Io)?;
    log::info!(
        "{} with {} for {} steps of {} into {}",
        cfg.scenario,
        cfg.method,
        cfg.n_steps(),
        cfg.dt,
        out_dir.display()
    );
    let mut sinks: [&mut dyn Sink; 1] = [&mut sink];
    match run_simulation(&cfg, state, &mut sinks) {
        Ok(r) => {
            let last = r.records.last().expect("at least one record");
            log::info!("done at t = {}: relative energy change {:e}", r.t, last.de_tot_rel);
            Ok(())
        }
        Err(RunError::Config(e)) => Err(Failure::Config(e)),
        Err(RunError::Io(e)) => Err(Failure::Io(e)),
        Err(e @ RunError::Step { .. }) => Err(Failure::Step(e.to_string())),
    }
}

fn spectrum(input: &Path, out: &Path) -> Result<(), Failure> {
    let (history, length) = read_field_history(input).map_err(Failure::Io)?;
    let grid = spectrum_2d(&history, length).map_err(|e| {
        Failure::Io(IoError::Format {
            path: input.to_path_buf(),
            message: e.to_string(),
        })
    })?;
    write_spectrum(out, &grid).map_err(Failure::Io)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { select, out_dir } => run(select, out_dir),
        Command::Config { select } => resolve(select).map(|c| print!("{}", c.to_toml())),
        Command::Spectrum { input, out } => spectrum(input, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
