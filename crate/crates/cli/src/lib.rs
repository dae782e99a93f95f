//! The `dimerbfz` command line.
//!
//! Every subcommand is a function from parsed arguments to an [`Output`]:
//! the text for stdout and an exit code (0 pass, 1 property failure). Input
//! errors come back as [`CliError::Input`] and exit with 2.

pub mod emit;
pub mod input;
pub mod serve;
pub mod session;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dimerbfz::cartan::GeneralizedCartanMatrix;
use dimerbfz::cylinder::check_dimer;
use dimerbfz::potential::{rigidity_check, Certificate, RigidityOptions, RigidityReport, Verdict};
use dimerbfz::quiver::VertexId;
use dimerbfz::sweep::sweep;
use dimerbfz::{bfz::FrozenArrows, Execution};

use input::{CellArgs, CellFile, SourceArgs};
use session::{Session, SessionJson};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Failure(String),
}

impl From<dimerbfz::Error> for CliError {
    fn from(e: dimerbfz::Error) -> Self {
        match e {
            dimerbfz::Error::NotPlanar { .. } | dimerbfz::Error::ReplayFailed(_) | dimerbfz::Error::Unreachable(_) => {
                CliError::Failure(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

#[derive(Debug, Parser)]
#[command(name = "dimerbfz", version, about = "BFZ quivers, dimer models on Dynkin cylinders, and rigidity certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Tikz,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the quiver of a double Bruhat cell and print it with its layout.
    Build {
        #[command(flatten)]
        cell: CellArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check the dimer-model axioms; exit 1 if any fails.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Certify every simple cycle in the Jacobian ideal; exit 1 if not rigid.
    Rigidity {
        #[command(flatten)]
        source: SourceArgs,
        /// Potential as JSON terms; defaults to the superpotential of the faces.
        #[arg(long, value_name = "FILE")]
        potential: Option<PathBuf>,
        /// Longest simple cycle to enumerate; defaults to the vertex count.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Mutate a seed and print the session.
    Mutate {
        #[command(flatten)]
        source: SourceArgs,
        /// Vertex to mutate at; repeat for a sequence.
        #[arg(long = "at", allow_hyphen_values = true)]
        at: Vec<VertexId>,
        /// Continue from a saved session instead of a fresh seed.
        #[arg(long, value_name = "FILE")]
        load: Option<PathBuf>,
        /// Write the resulting session here.
        #[arg(long, value_name = "FILE")]
        save: Option<PathBuf>,
    },
    /// Serve one session over HTTP.
    Serve {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_name = "FILE")]
        load: Option<PathBuf>,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
    /// Build, check and certify every cell (u, e) with u up to a given length.
    Sweep {
        #[arg(long = "type", value_name = "TYPE")]
        cartan: String,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value = "boundary", value_name = "omit|boundary")]
        frozen_arrows: FrozenArrows,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
    },
}

/// Verdict with the certificates that back it.
#[derive(Debug, Clone, Serialize)]
pub struct RigidityOutput {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub certificates: Vec<Certificate>,
}

impl From<RigidityReport> for RigidityOutput {
    fn from(r: RigidityReport) -> Self {
        RigidityOutput {
            verdict: r.verdict,
            certificates: r.certificates,
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap();
    s.push('\n');
    s
}

fn pass(stdout: String, ok: bool) -> Output {
    Output {
        stdout,
        code: if ok { 0 } else { 1 },
    }
}

pub fn build(cell: &CellArgs, format: Format) -> Result<Output, CliError> {
    let spec = cell.spec()?;
    let c = spec.build()?;
    let stdout = match format {
        Format::Json => json(&CellFile::new(&spec, &c)),
        Format::Dot => emit::dot(&c),
        Format::Tikz => emit::tikz(&c),
    };
    Ok(pass(stdout, true))
}

pub fn verify(source: &SourceArgs) -> Result<Output, CliError> {
    let loaded = source.load()?;
    let cell = loaded
        .cell
        .as_ref()
        .ok_or_else(|| CliError::Input("verify needs a quiver with string annotations".into()))?;
    let report = check_dimer(cell.bfz.quiver(), &cell.layout);
    Ok(pass(json(&report), report.passes()))
}

pub fn rigidity(source: &SourceArgs, potential: Option<&std::path::Path>, cap: Option<usize>) -> Result<Output, CliError> {
    let loaded = source.load()?;
    let (s, faces) = input::potential(&loaded, potential)?;
    let opts = RigidityOptions {
        length_cap: cap,
        ..RigidityOptions::default()
    };
    let layout = loaded.cell.as_ref().map(|c| &c.layout);
    let r = rigidity_check(&loaded.quiver, layout, &faces, &s, &opts)?;
    let rigid = r.verdict.rigid;
    Ok(pass(json(&RigidityOutput::from(r)), rigid))
}

pub fn open_session(source: &SourceArgs, load: Option<&std::path::Path>) -> Result<Session, CliError> {
    match load {
        Some(path) => {
            let j: SessionJson = serde_json::from_value(input::read_json(path)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Session::from_json(&j)
        }
        None => Ok(Session::new(source.load()?)),
    }
}

pub fn mutate(
    source: &SourceArgs,
    at: &[VertexId],
    load: Option<&std::path::Path>,
    save: Option<&std::path::Path>,
) -> Result<Output, CliError> {
    let mut s = open_session(source, load)?;
    for &k in at {
        s = s.mutate(k)?;
    }
    let text = json(&s.to_json());
    if let Some(path) = save {
        std::fs::write(path, &text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(pass(text, true))
}

pub fn run_sweep(cartan: &str, max_len: usize, frozen: FrozenArrows, sequential: bool) -> Result<Output, CliError> {
    let g: GeneralizedCartanMatrix = cartan.parse()?;
    let words = g.enumerate_weyl(max_len)?;
    let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
    let r = sweep(&g, &words, frozen, exec);
    let ok = r.all_dimer() && r.all_rigid();
    Ok(pass(json(&r), ok))
}

pub async fn serve(session: Session, port: u16) -> Result<(), CliError> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port))
        .await
        .map_err(|e| CliError::Input(format!("cannot bind port {port}: {e}")))?;
    log::info!("listening on http://127.0.0.1:{port}");
    axum::serve(listener, serve::router(serve::AppState::new(session)))
        .await
        .map_err(|e| CliError::Failure(e.to_string()))
}

/// Runs every subcommand except `serve`, which needs an async runtime.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Build { cell, format } => build(cell, *format),
        Command::Verify { source } => verify(source),
        Command::Rigidity { source, potential, cap } => rigidity(source, potential.as_deref(), *cap),
        Command::Mutate { source, at, load, save } => mutate(source, at, load.as_deref(), save.as_deref()),
        Command::Sweep {
            cartan,
            max_len,
            frozen_arrows,
            sequential,
        } => run_sweep(cartan, *max_len, *frozen_arrows, *sequential),
        Command::Serve { .. } => Err(CliError::Input("serve runs through main".into())),
    }
}
