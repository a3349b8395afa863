//! Command-line front end for `pencil4`.
//!
//! Every command reads a JSON scene (see [`config`]) and writes CSV, OBJ or
//! a text report. [`run`] is the whole program; `main` only forwards the
//! exit code.

pub mod commands;
pub mod config;
pub mod error;
pub mod projection;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::Options;
use crate::config::{Scene, SceneConfig};
use crate::error::{code, CliError, EXIT_CODES_HELP};
use crate::projection::ProjectionSpec;

#[derive(Debug, Parser)]
#[command(name = "pencil4", version, about = "Surface pencils in E⁴", after_help = EXIT_CODES_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frenet frame and curvatures of the spine, one row per s
    Frenet(CommonArgs),
    /// Surface points on the grid
    Eval(CommonArgs),
    /// First form, K, K_N and |H|² on the grid
    Curvature(CommonArgs),
    /// Compare closed-form curvatures against the finite-difference oracle
    Verify(CommonArgs),
    /// Report and check a flat design (flat_polar or vranceanu marching)
    FlatDesign(CommonArgs),
    /// Write a projected OBJ mesh or raw 4-D CSV
    Export(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Scene description (JSON)
    #[arg(long, value_name = "FILE")]
    pub config: PathBuf,
    /// Output file; standard output when omitted
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Grid size, overriding the configuration
    #[arg(long, value_name = "NSxNT", value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    /// Tolerance for verify
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Oracle first-derivative step; the second-derivative step is 5×
    #[arg(long, value_name = "H")]
    pub step: Option<f64>,
    /// drop:K, ortho:U;V;W or stereo
    #[arg(long, value_name = "SPEC")]
    pub projection: Option<String>,
}

fn parse_grid(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NSxNT, got `{text}`"))?;
    let n = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}"));
    Ok((n(a)?, n(b)?))
}

type Handler = fn(&Scene, &Options, &mut dyn Write) -> Result<i32, CliError>;

fn execute(command: &Command, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let (args, f): (_, Handler) = match command {
        Command::Frenet(a) => (a, commands::frenet),
        Command::Eval(a) => (a, commands::eval),
        Command::Curvature(a) => (a, commands::curvature),
        Command::Verify(a) => (a, commands::verify),
        Command::FlatDesign(a) => (a, commands::flat_design),
        Command::Export(a) => (a, commands::export),
    };
    if !(args.tol > 0.0) {
        return Err(CliError::Config(format!("--tol must be positive, got {}", args.tol)));
    }
    if let Some(h) = args.step {
        if !(h > 0.0 && h.is_finite()) {
            return Err(CliError::Config(format!("--step must be positive, got {h}")));
        }
    }
    let cfg = SceneConfig::load(&args.config)?;
    let projection = match args.projection.as_ref().or(cfg.output.projection.as_ref()) {
        Some(spec) => Some(spec.parse::<ProjectionSpec>()?),
        None => None,
    };
    let scene = Scene::build(&cfg, args.grid)?;
    let opts = Options {
        out: args.out.clone(),
        tol: Some(args.tol),
        step: args.step,
        projection,
        format: cfg.output.format,
    };
    f(&scene, &opts, stdout)
}

/// Runs the program on `args` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                code::USAGE
            } else {
                let _ = stdout.write_all(text.as_bytes());
                code::OK
            };
        }
    };
    match execute(&cli.command, stdout) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
