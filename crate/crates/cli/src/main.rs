//! `loopfact`: compose, factor and verify SU(2) loops from the command line.

// `!(x > tol)` rejects NaN along with small values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod io;
mod probe;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use loopfact::laurent::LaurentSeries;
use num_complex::Complex64;

use commands::Draw;
use config::RunConfig;
use io::{emit, field, read_json, Metadata};

#[derive(Parser)]
#[command(name = "loopfact", version, about = "Factorization of SU(2) loops")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct DrawArgs {
    /// Support length of generated eta and zeta.
    #[arg(long, default_value_t = 3)]
    support: usize,
    /// Number of chi coefficients in generated data.
    #[arg(long, default_value_t = 2)]
    chi_terms: usize,
    /// Overall magnitude of generated values.
    #[arg(long, default_value_t = 0.5)]
    amplitude: f64,
}

impl From<DrawArgs> for Draw {
    fn from(a: DrawArgs) -> Self {
        Draw { support: a.support, chi_terms: a.chi_terms, amplitude: a.amplitude }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Triangular,
    Rootsub,
}

#[derive(Subcommand)]
enum Command {
    /// Build the loop k1* diag(e^psi, e^-psi) k2 from root-subgroup coordinates.
    Compose {
        /// Parameter file; drawn from --seed when absent.
        params: Option<PathBuf>,
        #[command(flatten)]
        draw: DrawArgs,
    },
    /// Factor a loop file.
    Factor {
        #[arg(value_name = "LOOP")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Rootsub)]
        mode: Mode,
    },
    /// The x coordinate of the k2 built from zeta.
    XFromZeta {
        /// File with a `zeta` list; drawn from --seed when absent.
        params: Option<PathBuf>,
        #[command(flatten)]
        draw: DrawArgs,
    },
    /// Zeta parameters of the k2 with a given x.
    ZetaFromX {
        /// File with an `x` series.
        input: PathBuf,
    },
    /// Check every fixture in a directory against the identity suite.
    Verify {
        dir: PathBuf,
    },
    /// Tabulate diagnostics for nested truncations of one random zeta sequence.
    ConjectureProbe {
        /// Support lengths to tabulate.
        #[arg(long, value_delimiter = ',', default_values_t = [4, 8, 16, 32, 64])]
        supports: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
    },
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Compose { .. } => "compose",
        Command::Factor { .. } => "factor",
        Command::XFromZeta { .. } => "x-from-zeta",
        Command::ZetaFromX { .. } => "zeta-from-x",
        Command::Verify { .. } => "verify",
        Command::ConjectureProbe { .. } => "conjecture-probe",
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = &cli.config;
    cfg.validate()?;
    let meta = Metadata::new(command_name(&cli.command), cfg);
    let out = cli.out.as_deref();
    match cli.command {
        Command::Compose { params, draw } => {
            let p = commands::load_params(params.as_deref(), cfg, draw.into())?;
            emit(out, &meta, commands::compose(p, cfg)?)?;
        }
        Command::Factor { input, mode } => {
            let (g, stored) = commands::load_loop(&input)?;
            match mode {
                Mode::Triangular => emit(out, &meta, commands::factor_triangular(&g, cfg)?)?,
                Mode::Rootsub => emit(out, &meta, commands::factor_rootsub(&g, stored, cfg)?)?,
            }
        }
        Command::XFromZeta { params, draw } => {
            let zeta: Vec<Complex64> = match &params {
                Some(path) => {
                    let v = read_json(path)?;
                    match v.get("params") {
                        Some(_) => field::<io::Params>(&v, "params", false)?.zeta,
                        None => field(&v, "zeta", false)?,
                    }
                }
                None => commands::load_params(None, cfg, draw.into())?.zeta,
            };
            cfg.check_support(zeta.len())?;
            emit(out, &meta, commands::x_from_zeta_cmd(zeta, cfg)?)?;
        }
        Command::ZetaFromX { input } => {
            let x: LaurentSeries = field(&read_json(&input)?, "x", false)?;
            emit(out, &meta, commands::zeta_from_x_cmd(x, cfg)?)?;
        }
        Command::Verify { dir } => {
            let report = verify::verify_dir(&dir, cfg)?;
            let ok = report.summary.all_pass;
            emit(out, &meta, report)?;
            if !ok {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::ConjectureProbe { supports, amplitude } => {
            emit(out, &meta, probe::probe(cfg, &supports, amplitude)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
