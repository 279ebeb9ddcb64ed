use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hodge_corners::dec::{BaseMethod, BaseResolution};
use hodge_corners::{BoundStates, Error, RecursionOptions};
use num_complex::Complex64;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "hodge-corners", version, about = "Essential spectra and Fredholm tests for Hodge Laplacians on manifolds with corners")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a complex description and report every violation.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Spectrum of Δ_p on the interior of a complex or one of its faces.
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: usize,
        /// Restrict to this face first.
        #[arg(long)]
        face: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Start of the essential spectrum of Δ_p.
    Threshold {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Is Δ_p − z Fredholm?
    Fredholm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: usize,
        /// Shift as `a`, `a+bi` or `a-bi`.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        #[command(flatten)]
        common: Common,
    },
    /// Is (1 + Δ_p)^(-s) compact?
    Compactness {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Betti numbers of a closed face from its DEC Laplacians.
    Betti {
        #[arg(long, conflicts_with = "mesh", required_unless_present = "mesh")]
        input: Option<PathBuf>,
        /// OFF mesh (edges or triangles).
        #[arg(long)]
        mesh: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Truncated-cylinder ground energies over each boundary hyperface.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: usize,
        /// Cylinder lengths.
        #[arg(long, value_delimiter = ',', default_values_t = [5.0, 10.0, 20.0])]
        length: Vec<f64>,
        /// Interior grid points along the cylinder axis.
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Drop catalog eigenvalues above this value.
    #[arg(long, default_value_t = 100.0)]
    cutoff: f64,
    /// Use DEC meshes for circles, tori and 2-spheres instead of closed forms.
    #[arg(long)]
    dec: bool,
    /// Icosphere subdivision level for DEC spheres.
    #[arg(long, default_value_t = 2)]
    subdiv: u32,
    /// Segments of DEC circles.
    #[arg(long, default_value_t = 64)]
    segments: usize,
    /// Grid points per side of DEC tori.
    #[arg(long, default_value_t = 16)]
    torus_grid: usize,
    /// Relative tolerance of the Jacobi eigensolver.
    #[arg(long, default_value_t = 1e-13)]
    eigen_tol: f64,
    /// Mark thresholds that may be too high because bound states are unknown.
    #[arg(long)]
    certified: bool,
    /// JSON file `{"face": {"p": [eigenvalues]}}` of known bound states.
    #[arg(long)]
    bound_states: Option<PathBuf>,
}

impl Common {
    fn resolution(&self) -> Result<BaseResolution, Error> {
        if !(self.cutoff.is_finite() && self.cutoff >= 0.0) {
            return Err(Error::Domain(format!("cutoff {} must be a nonnegative number", self.cutoff)));
        }
        if !(self.eigen_tol > 0.0 && self.eigen_tol < 1.0) {
            return Err(Error::Domain(format!("eigen tolerance {} must lie in (0, 1)", self.eigen_tol)));
        }
        Ok(BaseResolution {
            method: if self.dec { BaseMethod::Dec } else { BaseMethod::Catalog },
            cutoff: self.cutoff,
            circle_segments: self.segments,
            torus_grid: self.torus_grid,
            sphere_subdivisions: self.subdiv,
            eigen_tol: self.eigen_tol,
        })
    }

    fn options(&self) -> Result<RecursionOptions, Error> {
        let bound_states = match &self.bound_states {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
                })?;
                BoundStates::from_json_str(&text)?
            }
            None => BoundStates::default(),
        };
        Ok(RecursionOptions { bound_states, base_resolution: self.resolution()?, certified_only: self.certified })
    }

    fn header(&self) -> Result<Vec<String>, Error> {
        Ok(vec![
            format!("hodge-corners {}", env!("CARGO_PKG_VERSION")),
            format!("resolution: {}", self.resolution()?),
            format!("certified_only: {}", self.certified),
            format!(
                "bound_states: {}",
                self.bound_states.as_ref().map_or("none".to_string(), |p| p.display().to_string())
            ),
        ])
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` with a `.` decimal point.
fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("`{s}` is not a complex number (expected a, a+bi or a-bi)");
    let real = |x: &str| x.parse::<f64>().map_err(|_| bad());
    let imag = |x: &str| match x {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real(x),
    };
    let z = match t.strip_suffix('i') {
        None => Complex64::new(real(&t)?, 0.0),
        Some(body) => {
            // split at the last sign that is not a leading sign or an exponent sign
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
            match split {
                Some(k) => Complex64::new(real(&body[..k])?, imag(&body[k..])?),
                None => Complex64::new(0.0, imag(body)?),
            }
        }
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(bad());
    }
    Ok(z)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidComplex(_) | Error::Parse(_) | Error::Io(_) => 1,
        Error::Numerical(_) | Error::Resource(_) => 2,
        Error::Domain(_) | Error::Unsupported(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_shifts() {
        assert_eq!(parse_complex("1").unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(parse_complex("-2.5").unwrap(), Complex64::new(-2.5, 0.0));
        assert_eq!(parse_complex("1+2i").unwrap(), Complex64::new(1.0, 2.0));
        assert_eq!(parse_complex("1-2i").unwrap(), Complex64::new(1.0, -2.0));
        assert_eq!(parse_complex("-1-0.5i").unwrap(), Complex64::new(-1.0, -0.5));
        assert_eq!(parse_complex("3i").unwrap(), Complex64::new(0.0, 3.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2E+1i").unwrap(), Complex64::new(1e-3, 20.0));
        for bad in ["", "1,5", "x", "1+2j", "nan", "inf"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Parse("x".into())), 1);
        assert_eq!(exit_code(&Error::Numerical("x".into())), 2);
        assert_eq!(exit_code(&Error::Resource("x".into())), 2);
        assert_eq!(exit_code(&Error::Unsupported("x".into())), 3);
    }
}
