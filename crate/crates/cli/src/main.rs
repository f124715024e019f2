//! `cvsteer` command-line interface.

mod figures;
mod output;
mod tables;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use cvsteer::bell::{self, BellOptions, DEFAULT_SEED, DEFAULT_STARTS};
use cvsteer::entropy::{GridOptions, DEFAULT_HALF_WIDTH_MULT};
use cvsteer::reid::{self, ReidReport, DEFAULT_THETA1, DEFAULT_THETA2};
use cvsteer::steering::{self, EntropicReport};
use cvsteer::{BellReport, StateFamily};

use output::{Format, Sink};

const AFTER_HELP: &str = "\
State grammar:
  lg:n=<int>,m=<int>
  tmsv:r=<float>
  sub:r=<float>,order=<1|2>,k=<0|1>
  noon:N=<int>

Exit codes: 0 success, 2 usage or parse error, 3 numeric failure.
RAYON_NUM_THREADS is honoured when --threads is not given.";

#[derive(Parser, Debug)]
#[command(name = "cvsteer", version, about = "Steering and Bell nonlocality of two-mode continuous-variable states", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Base grid nodes per axis for entropy integrals [default: 8192 (1D), 1024 (2D)]
    #[arg(long, global = true)]
    grid_nodes: Option<usize>,

    /// Grid half-width in standard deviations (plus one unit)
    #[arg(long, global = true, default_value_t = DEFAULT_HALF_WIDTH_MULT)]
    half_width_mult: f64,

    /// Double the entropy grid resolution per axis
    #[arg(long, global = true)]
    refine: bool,

    /// Seed for the Bell optimizer starts
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Output format [default: csv for table and figure, json otherwise]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads [default: available parallelism]
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run steering and Bell criteria on one state
    Analyze {
        state: StateFamily,
        /// Comma-separated subset of criteria
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Criterion::Reid, Criterion::Entropic, Criterion::Bell])]
        criteria: Vec<Criterion>,
        /// First Reid measurement angle (radians)
        #[arg(long, default_value_t = DEFAULT_THETA1, allow_negative_numbers = true)]
        theta1: f64,
        /// Second Reid measurement angle (radians)
        #[arg(long, default_value_t = DEFAULT_THETA2, allow_negative_numbers = true)]
        theta2: f64,
    },
    /// Comparison tables
    Table {
        #[arg(value_enum)]
        which: tables::Which,
    },
    /// Plot data for the figures
    Figure {
        #[arg(value_enum)]
        which: figures::Which,
    },
    /// Maximize the Bell-CHSH sum for one state
    BellOpt {
        state: StateFamily,
        /// Optimize the squeezing parameter too
        #[arg(long)]
        free_r: bool,
        /// Search complex displacements (8 real dimensions)
        #[arg(long)]
        complex: bool,
        #[arg(long, default_value_t = DEFAULT_STARTS)]
        starts: usize,
        /// Dump the winning start's iteration history as CSV
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Print version
    Version,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Criterion {
    Reid,
    Entropic,
    Bell,
}

#[derive(Debug, Serialize)]
struct AnalyzeBundle {
    state: String,
    family: StateFamily,
    #[serde(skip_serializing_if = "Option::is_none")]
    reid: Option<ReidReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    entropic: Option<EntropicReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bell: Option<BellReport>,
}

#[derive(Debug)]
enum Failure {
    Numeric(cvsteer::Error),
    Io(std::io::Error),
}

impl From<cvsteer::Error> for Failure {
    fn from(e: cvsteer::Error) -> Self {
        Failure::Numeric(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

pub struct Settings {
    pub grid: GridOptions,
    pub seed: u64,
    pub format: Format,
}

impl Cli {
    fn settings(&self) -> Settings {
        Settings {
            grid: GridOptions {
                half_width_mult: self.half_width_mult,
                nodes: self.grid_nodes,
                refine: if self.refine { 2 } else { 1 },
            },
            seed: self.seed,
            format: self.format.unwrap_or(match self.command {
                Command::Table { .. } | Command::Figure { .. } => Format::Csv,
                _ => Format::Json,
            }),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let settings = cli.settings();
    let sink = Sink::new(cli.out.clone());
    match &cli.command {
        Command::Analyze { state, criteria, theta1, theta2 } => {
            let bundle = analyze(state, criteria, (*theta1, *theta2), &settings)?;
            let value = serde_json::to_value(&bundle).expect("reports serialize");
            sink.write_value(&value, settings.format)?;
        }
        Command::Table { which } => {
            let table = tables::build(*which, &settings)?;
            sink.write_table(&table, settings.format)?;
        }
        Command::Figure { which } => {
            let table = figures::build(*which, &settings)?;
            sink.write_table(&table, settings.format)?;
        }
        Command::BellOpt { state, free_r, complex, starts, trace } => {
            let opts = BellOptions {
                starts: *starts,
                seed: settings.seed,
                free_r: *free_r,
                complex: *complex,
                ..Default::default()
            };
            let (report, rows) = bell::bell_optimize_traced(state, &opts, trace.is_some())?;
            if let Some(path) = trace {
                let f = std::fs::File::create(path)?;
                bell::write_trace_csv(&rows, std::io::BufWriter::new(f))?;
            }
            let mut value = serde_json::to_value(&report).expect("report serializes");
            if !report.violation {
                if let Value::Object(m) = &mut value {
                    m.insert("note".into(), Value::String("no violation found".into()));
                }
            }
            sink.write_value(&value, settings.format)?;
        }
        Command::Version => {
            sink.write_text(&format!("cvsteer {}\n", env!("CARGO_PKG_VERSION")))?;
        }
    }
    Ok(())
}

fn analyze(
    state: &StateFamily,
    criteria: &[Criterion],
    thetas: (f64, f64),
    s: &Settings,
) -> Result<AnalyzeBundle, Failure> {
    let w = state.wigner()?;
    let has = |c| criteria.contains(&c);
    let reid = if has(Criterion::Reid) {
        Some(reid::reid_test(&w, thetas.0, thetas.1)?)
    } else {
        None
    };
    let entropic = if has(Criterion::Entropic) {
        Some(steering::entropic_test(&w, &steering::default_pairing(state), &s.grid)?)
    } else {
        None
    };
    let bell = if has(Criterion::Bell) {
        let opts = BellOptions { seed: s.seed, ..Default::default() };
        Some(bell::bell_optimize(state, &opts)?)
    } else {
        None
    };
    Ok(AnalyzeBundle {
        state: state.to_string(),
        family: *state,
        reid,
        entropic,
        bell,
    })
}
