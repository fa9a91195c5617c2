//! Command-line front end for `casimir-core`: single points, separation
//! scans, deviation curves, series coefficients and thermal ratios, all
//! written as CSV with a `#` provenance header.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

pub mod run;
pub mod spec;

pub use run::{run, Report, Row};
pub use spec::{parse_config, parse_length, Command, Grid, RawSpec, RunSpec, Spacing};

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    /// A setting is missing, unknown or out of range.
    #[error("{field}: {message}")]
    Field { field: String, message: String },

    #[error(transparent)]
    Core(#[from] casimir_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

/// Environment variable capping the worker pool.
pub const THREADS_VAR: &str = "CASIMIR_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "casimir",
    version,
    about = "Casimir energy and force between real metals"
)]
pub struct Cli {
    /// point, scan, figure1, figure2, coefficients or thermal-ratio
    pub command: Option<String>,
    /// Material preset (Al) or path of a key=value material file
    #[arg(long)]
    pub material: Option<String>,
    /// ideal, plasma-exact, plasma-approx or normal-skin
    #[arg(long)]
    pub model: Option<String>,
    /// impedance or lifshitz
    #[arg(long)]
    pub formalism: Option<String>,
    /// Separation, e.g. 1e-6, 100nm, 1um, 1mm
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Separation grid min:max:count[:log|lin]
    #[arg(long)]
    pub grid: Option<String>,
    /// Temperature in kelvin; 0 selects the zero-temperature formulas
    #[arg(long = "T", allow_hyphen_values = true)]
    pub temperature: Option<String>,
    /// Sphere radius for the sphere-plate force
    #[arg(long = "R", allow_hyphen_values = true)]
    pub radius: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub rel_tol: Option<String>,
    /// Panel budget of each adaptive quadrature pass
    #[arg(long, allow_hyphen_values = true)]
    pub max_subdivisions: Option<String>,
    /// Output CSV path; stdout when absent
    #[arg(long)]
    pub out: Option<String>,
    /// key=value or JSON file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Cli {
    /// The flags as configuration keys.
    pub fn overrides(&self) -> Result<RawSpec> {
        let mut raw = RawSpec::new();
        let pairs = [
            ("command", &self.command),
            ("material", &self.material),
            ("model", &self.model),
            ("formalism", &self.formalism),
            ("a", &self.a),
            ("grid", &self.grid),
            ("T", &self.temperature),
            ("R", &self.radius),
            ("rel_tol", &self.rel_tol),
            ("max_subdivisions", &self.max_subdivisions),
            ("out", &self.out),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                raw.set(key, v.as_str())?;
            }
        }
        Ok(raw)
    }
}

/// Reads [`THREADS_VAR`]; unset or empty means no cap.
pub fn thread_cap(value: Option<&str>) -> Result<Option<usize>> {
    match value.map(str::trim).filter(|v| !v.is_empty()) {
        None => Ok(None),
        Some(v) => match v.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Field {
                field: THREADS_VAR.into(),
                message: format!("`{v}` is not a positive whole number"),
            }),
        },
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    let spec = parse_config(cli.config.as_deref(), &cli.overrides()?)?;
    let threads = thread_cap(std::env::var(THREADS_VAR).ok().as_deref())?;
    let report = run(&spec, threads)?;
    let io_err = |source| CliError::Io {
        path: spec
            .out
            .as_ref()
            .map_or_else(|| "stdout".to_string(), |p| p.display().to_string()),
        source,
    };
    match &spec.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
            report.write_csv(&mut w).map_err(io_err)?;
            w.flush().map_err(io_err)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            report.write_csv(&mut w).map_err(io_err)?;
            w.flush().map_err(io_err)?;
        }
    }
    Ok(report)
}

/// Parses `args`, runs and writes the CSV. Returns the process exit code:
/// 0 on success, 1 for invalid input, 2 when some row did not converge.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let failed = report.rows.iter().filter(|r| !r.converged).count();
            if failed == 0 {
                EXIT_OK
            } else {
                eprintln!(
                    "error: {failed} of {} rows did not converge (converged column is 0)",
                    report.rows.len()
                );
                EXIT_NOT_CONVERGED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}
