//! `trap <subcommand> [--config PATH] [--out PATH] [key=value ...]`
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 numerical
//! failure. `TRAP_THREADS` caps the worker pool used by sweeps.

pub mod commands;
pub mod config;
pub mod output;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Result, TrapError};
use config::Scenario;
use output::write_atomic;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "trap",
    version,
    about = "Axial double-well simulator for a planar Penning trap"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario file with `key = value` lines.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file (a directory for `figure`); CSV goes to stdout otherwise.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// `key=value` overrides applied after the config file.
    #[arg(value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// On-axis potential profile between the electrode planes.
    Potential(Common),
    /// Transition voltage, expansion integrals and the quartic cross-check.
    Transition(Common),
    /// Well distance and barrier height along a V3 sweep.
    Sweep(Common),
    /// Tunneling law and frequencies over well distances and barriers.
    Tunneling(Common),
    /// Real-time propagation of a localized state.
    Evolve(Common),
    /// Data for one of the figures (2, 3, 4, 6, 7).
    Figure {
        n: u8,
        #[command(flatten)]
        common: Common,
    },
}

pub fn exit_code(err: &TrapError) -> i32 {
    match err {
        TrapError::Config { .. } | TrapError::Io(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

fn thread_count() -> Result<Option<usize>> {
    match std::env::var("TRAP_THREADS") {
        Err(_) => Ok(None),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(TrapError::config(
                "TRAP_THREADS",
                format!("`{v}` is not a positive integer"),
            )),
        },
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = thread_count().and_then(|threads| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            builder = builder.num_threads(n);
        }
        let pool = builder
            .build()
            .map_err(|e| TrapError::config("TRAP_THREADS", e.to_string()))?;
        pool.install(|| dispatch(&cli.command, stdout, stderr))
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(csv: &str, out: Option<&Path>, stdout: &mut (dyn Write + Send)) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, csv),
        None => stdout.write_all(csv.as_bytes()).map_err(TrapError::from),
    }
}

fn dispatch(command: &Command, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> Result<()> {
    let common = match command {
        Command::Potential(c)
        | Command::Transition(c)
        | Command::Sweep(c)
        | Command::Tunneling(c)
        | Command::Evolve(c) => c,
        Command::Figure { common, .. } => common,
    };
    let scenario = Scenario::load(common.config.as_deref(), &common.overrides)?;
    let out = common.out.as_deref();
    match command {
        Command::Potential(_) => {
            let r = commands::potential(&scenario)?;
            emit(&r.table.render(), out, stdout)?;
            stderr.write_all(r.report.as_bytes())?;
        }
        Command::Transition(_) => {
            let r = commands::transition(&scenario)?;
            stdout.write_all(r.report.as_bytes())?;
            if let Some(path) = out {
                write_atomic(path, &r.table.render())?;
            }
        }
        Command::Sweep(_) => {
            let r = commands::sweep(&scenario)?;
            emit(&r.table.render(), out, stdout)?;
            stderr.write_all(r.report.as_bytes())?;
        }
        Command::Tunneling(_) => {
            let r = commands::tunneling(&scenario)?;
            emit(&r.table.render(), out, stdout)?;
            if out.is_some() {
                stdout.write_all(r.report.as_bytes())?;
            } else {
                stderr.write_all(r.report.as_bytes())?;
            }
        }
        Command::Evolve(_) => {
            let ev = commands::evolve(&scenario)?;
            emit(&ev.rendered.table.render(), out, stdout)?;
            if let (Some(table), Some(path)) = (&ev.density, &scenario.evolve_density_path) {
                write_atomic(Path::new(path), &table.render())?;
            }
            stderr.write_all(ev.rendered.report.as_bytes())?;
        }
        Command::Figure { n, .. } => {
            if !commands::FIGURES.contains(n) {
                return Err(TrapError::config(
                    "figure",
                    format!("unknown figure {n}; choose one of 2, 3, 4, 6, 7"),
                ));
            }
            let dir = out.unwrap_or(Path::new("."));
            std::fs::create_dir_all(dir).map_err(|e| TrapError::Io(format!("{}: {e}", dir.display())))?;
            let tables = commands::figure(*n, &scenario)?;
            let names: Vec<String> = tables.iter().map(|(name, _)| name.clone()).collect();
            for (name, table) in &tables {
                write_atomic(&dir.join(name), &table.render())?;
            }
            let meta = commands::figure_meta(*n, &scenario, &names);
            write_atomic(&dir.join(format!("fig{n}.meta")), &meta)?;
            writeln!(stderr, "figure {n}: wrote {} to {}", names.join(", "), dir.display())?;
        }
    }
    Ok(())
}
