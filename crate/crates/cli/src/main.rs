//! `bellscope`: classical and quantum Bell-type numbers from the command line.

mod output;
mod sources;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bellscope_core::correlators::{builtin, CorrelatorKind};
use bellscope_core::polytope::{classical_bounds, Vertex};
use bellscope_core::search::{
    default_werner_grid, grid_scan, linspace, optimize, quantum_bform, werner_sweep, AngleId,
    BellEvaluation, SearchConfig, Sense,
};
use bellscope_core::tomography::stochastic_from_directions;
use bellscope_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use output::{csv_row, emit, json, matrix_csv, sig10, Format};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numeric() => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bellscope",
    version,
    about = "Classical and quantum Bell-type numbers"
)]
struct Cli {
    /// Worker threads for enumeration and search.
    #[arg(long, global = true, env = "BELLSCOPE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Subsystem dimensions, e.g. `2,3`.
    #[arg(long)]
    dims: Option<String>,
    /// Correlation matrix: sigma, ihat, phat or file:<path>.
    #[arg(long = "c", default_value = "ihat")]
    c: String,
    /// State: bell22, bell23, bell33, ghz222, werner:<p> or a JSON file.
    #[arg(long)]
    rho: Option<String>,
    /// Direction file (or an emitted quantum-opt result).
    #[arg(long)]
    dirs: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random starts besides the built-in warm starts.
    #[arg(long)]
    starts: Option<usize>,
    /// Step tolerance of the angle search, in radians.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Also list fictitious qutrit corners.
    #[arg(long)]
    include_nonphysical: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Sigma,
    Ihat,
    Phat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SenseArg {
    Max,
    Min,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit a builtin correlation matrix.
    SignMatrix {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate polytope vertices and their Bell-type numbers.
    Classical {
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the quantum B-form at given directions.
    QuantumEval {
        #[command(flatten)]
        common: Common,
    },
    /// Search the Euler angles for the extremal quantum B-form.
    QuantumOpt {
        #[arg(long, value_enum, default_value = "max")]
        sense: SenseArg,
        #[command(flatten)]
        common: Common,
    },
    /// Maximal two-qubit CHSH value across Werner states.
    Werner {
        /// Grid as start:end:count (default 0:1:21).
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate B over a grid of one or two angles.
    Scan {
        /// Angle range such as theta2=0:3.1416:64; give once or twice.
        #[arg(long, required = true)]
        vary: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Emit the quantum stochastic matrix of a state at given directions.
    Tomogram {
        #[command(flatten)]
        common: Common,
    },
}

impl Common {
    fn dims(&self) -> Result<Option<Vec<usize>>, CliError> {
        self.dims.as_deref().map(sources::parse_dims).transpose()
    }

    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }

    fn config(&self) -> Result<SearchConfig, CliError> {
        let mut cfg = SearchConfig::with_seed(self.seed);
        if let Some(n) = self.starts {
            cfg.n_starts = n;
        }
        if let Some(tol) = self.tol {
            cfg.step_tolerance = tol;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn rho_label(&self) -> Result<&str, CliError> {
        self.rho
            .as_deref()
            .ok_or_else(|| CliError::Usage("--rho is required".into()))
    }

    fn dirs_path(&self) -> Result<&Path, CliError> {
        self.dirs
            .as_deref()
            .ok_or_else(|| CliError::Usage("--dirs is required".into()))
    }

    /// State first, then the correlator with the state's dims as fallback.
    fn state_and_correlator(
        &self,
    ) -> Result<
        (
            bellscope_core::states::DensityMatrix,
            bellscope_core::correlators::CorrelationMatrix,
        ),
        CliError,
    > {
        let dims = self.dims()?;
        let rho = sources::density(self.rho_label()?, dims.as_deref())?;
        let c = sources::correlator(&self.c, Some(dims.as_deref().unwrap_or(rho.dims())))?;
        Ok((rho, c))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bellscope: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::SignMatrix { kind, common } => sign_matrix(kind, &common),
        Command::Classical { common } => classical(&common),
        Command::QuantumEval { common } => quantum_eval(&common),
        Command::QuantumOpt { sense, common } => quantum_opt(sense, &common),
        Command::Werner { grid, common } => werner(grid.as_deref(), &common),
        Command::Scan { vary, common } => scan(&vary, &common),
        Command::Tomogram { common } => tomogram(&common),
    }
}

fn sign_matrix(kind: KindArg, common: &Common) -> Result<(), CliError> {
    let dims = common
        .dims()?
        .ok_or_else(|| CliError::Usage("--dims is required".into()))?;
    let kind = match kind {
        KindArg::Sigma => CorrelatorKind::Sigma,
        KindArg::Ihat => CorrelatorKind::Ihat,
        KindArg::Phat => CorrelatorKind::Phat,
    };
    let c = builtin(kind, &dims)?;
    let text = match common.format(Format::Json) {
        Format::Json => {
            let mut s = c.to_json();
            s.push('\n');
            s
        }
        Format::Csv => matrix_csv(&c.stored().to_rows()),
    };
    emit(common.out(), &text)
}

#[derive(Serialize)]
struct ClassicalRow {
    vertex_label: String,
    value: f64,
    physical: bool,
    index_set: String,
}

#[derive(Serialize)]
struct ClassicalReport {
    max: f64,
    max_vertex: String,
    min: f64,
    min_vertex: String,
    vertices: Vec<ClassicalRow>,
}

fn classical(common: &Common) -> Result<(), CliError> {
    let dims = common.dims()?;
    let c = sources::correlator(&common.c, dims.as_deref())?;
    let bounds = classical_bounds(&c, common.include_nonphysical)?;
    let rows = bounds
        .values
        .iter()
        .map(|v| {
            let vertex = Vertex::from_label(c.layout(), &v.label)?;
            let number = bellscope_core::polytope::bell_number_at(&c, &vertex)?;
            Ok(ClassicalRow {
                vertex_label: v.label.clone(),
                value: v.value,
                physical: v.physical,
                index_set: number.formula(),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let report = ClassicalReport {
        max: bounds.max.value,
        max_vertex: bounds.max.vertex.label(),
        min: bounds.min.value,
        min_vertex: bounds.min.vertex.label(),
        vertices: rows,
    };
    let text = match common.format(Format::Csv) {
        Format::Json => json(&report),
        Format::Csv => {
            let mut s = csv_row(["vertex_label", "value", "physical", "index_set"]);
            for r in &report.vertices {
                s.push_str(&csv_row([
                    r.vertex_label.clone(),
                    sig10(r.value),
                    r.physical.to_string(),
                    r.index_set.clone(),
                ]));
            }
            s
        }
    };
    emit(common.out(), &text)?;
    eprintln!("max={}", sig10(report.max));
    Ok(())
}

fn evaluation_csv(e: &BellEvaluation) -> String {
    let mut header = vec!["value".to_string()];
    let mut row = vec![sig10(e.value)];
    for (k, angle) in e.angles.to_flat().iter().enumerate() {
        let name = if k % 2 == 0 { "theta" } else { "phi" };
        header.push(format!("{name}{}", k / 2 + 1));
        row.push(sig10(*angle));
    }
    let mut s = csv_row(header);
    s.push_str(&csv_row(row));
    s
}

fn quantum_eval(common: &Common) -> Result<(), CliError> {
    let (rho, c) = common.state_and_correlator()?;
    let dirs = sources::directions(common.dirs_path()?)?;
    let value = quantum_bform(&c, &rho, &dirs)?;
    let evaluation = BellEvaluation {
        value,
        angles: dirs,
        c_label: c.kind().to_string(),
        rho_label: rho.label().to_string(),
        converged: true,
        sense: Sense::Maximize,
    };
    let text = match common.format(Format::Json) {
        Format::Json => json(&evaluation),
        Format::Csv => evaluation_csv(&evaluation),
    };
    emit(common.out(), &text)
}

fn quantum_opt(sense: SenseArg, common: &Common) -> Result<(), CliError> {
    let (rho, c) = common.state_and_correlator()?;
    let sense = match sense {
        SenseArg::Max => Sense::Maximize,
        SenseArg::Min => Sense::Minimize,
    };
    let evaluation = optimize(&c, &rho, &common.config()?, sense)?;
    let text = match common.format(Format::Json) {
        Format::Json => json(&evaluation),
        Format::Csv => evaluation_csv(&evaluation),
    };
    emit(common.out(), &text)
}

/// `start:end:count`.
fn parse_range(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("range {s:?} must look like start:end:count"));
    let parts: Vec<&str> = s.split(':').collect();
    let [start, end, count] = parts.as_slice() else {
        return Err(bad());
    };
    let start: f64 = start.parse().map_err(|_| bad())?;
    let end: f64 = end.parse().map_err(|_| bad())?;
    let count: usize = count.parse().map_err(|_| bad())?;
    if count == 0 || !start.is_finite() || !end.is_finite() {
        return Err(bad());
    }
    Ok(linspace(start, end, count))
}

fn werner(grid: Option<&str>, common: &Common) -> Result<(), CliError> {
    let grid = match grid {
        Some(g) => parse_range(g)?,
        None => default_werner_grid(),
    };
    let points = werner_sweep(&grid, &common.config()?)?;
    let text = match common.format(Format::Json) {
        Format::Json => json(&points),
        Format::Csv => {
            let mut s = csv_row(["p", "max"]);
            for pt in &points {
                s.push_str(&csv_row([sig10(pt.p), sig10(pt.max.value)]));
            }
            s
        }
    };
    emit(common.out(), &text)
}

fn scan(vary: &[String], common: &Common) -> Result<(), CliError> {
    let (rho, c) = common.state_and_correlator()?;
    let base = match &common.dirs {
        Some(path) => sources::directions(path)?,
        None => sources::zero_directions(rho.dims())?,
    };
    let axes = vary
        .iter()
        .map(|v| {
            let (id, range) = v.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("--vary {v:?} must look like theta2=0:3.14:64"))
            })?;
            Ok((id.parse::<AngleId>()?, parse_range(range)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let grid = grid_scan(&c, &rho, &base, &axes)?;
    let text = match common.format(Format::Csv) {
        Format::Json => json(&grid),
        Format::Csv => {
            let header = grid
                .angles
                .iter()
                .map(ToString::to_string)
                .chain(std::iter::once("B".to_string()));
            let mut s = csv_row(header);
            s.push_str(&matrix_csv(&grid.rows));
            s
        }
    };
    emit(common.out(), &text)
}

fn tomogram(common: &Common) -> Result<(), CliError> {
    let dims = common.dims()?;
    let rho = sources::density(common.rho_label()?, dims.as_deref())?;
    let dirs = sources::directions(common.dirs_path()?)?;
    let m = stochastic_from_directions(&rho, &dirs)?;
    let text = match common.format(Format::Json) {
        Format::Json => {
            let mut s = m.to_json();
            s.push('\n');
            s
        }
        Format::Csv => matrix_csv(&m.entries().to_rows()),
    };
    emit(common.out(), &text)
}
