mod config;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use photon_fidelity::localization::{DEFAULT_BRACKET_MAX, DEFAULT_THRESHOLD};
use photon_fidelity::format::format_g9;
use photon_fidelity::poincare::direction;
use photon_fidelity::{
    compute_curve, extension, theta_closed_form, theta_general, write_curve, CurveRequest, Error,
    ExtensionQuery, Measure, PoincareTransform, TransformKind,
};

use config::{Config, THREADS_ENV};
use verify::Suite;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "photon-fidelity", version, about = "Photon localization fidelities as CSV")]
struct Cli {
    /// Flat key=value file with tolerances, constants and defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fidelity against separation a/l, or against overall phase with --phase-sweep.
    Curve {
        #[arg(long, value_parser = parse_measure)]
        measure: Measure,
        #[arg(long = "n-photons", default_value_t = 1.0)]
        n_photons: f64,
        #[arg(long = "a-min", allow_negative_numbers = true)]
        a_min: Option<f64>,
        #[arg(long = "a-max", allow_negative_numbers = true)]
        a_max: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        /// Sweep the overall phase over [0, pi] instead of the separation.
        #[arg(long = "phase-sweep")]
        phase_sweep: bool,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Separation at which the fidelity drops to the threshold.
    Extension {
        #[arg(long, value_parser = parse_measure, default_value = "c")]
        measure: Measure,
        #[arg(long = "n-photons", value_delimiter = ',', default_value = "1")]
        n_photons: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        threshold: Option<f64>,
        #[arg(long = "bracket-max")]
        bracket_max: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Wigner phase of a rotation or boost about y at direction (theta, phi).
    Theta {
        #[arg(long, value_parser = parse_transform)]
        transform: TransformKind,
        /// Angle in radians, or velocity in units of c.
        #[arg(long, allow_negative_numbers = true)]
        param: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, allow_negative_numbers = true)]
        phi: f64,
    },
    /// Run a self-check suite; exits 1 if any check fails.
    Verify {
        #[arg(long)]
        suite: Suite,
    },
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_transform(s: &str) -> Result<TransformKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter(_) => EXIT_USAGE,
        Error::ConvergenceFailure { .. } | Error::NoCrossing { .. } | Error::AmbiguousRoot { .. } => {
            EXIT_NO_CONVERGENCE
        }
        _ => EXIT_FAILURE,
    }
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<u8, Error> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let threads = cfg.threads(std::env::var(THREADS_ENV).ok().as_deref())?;
    // Fails only if a pool already exists, which cannot happen here.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    let spec = cfg.quadrature()?;
    let constants = cfg.constants()?;

    match cli.command {
        Command::Curve {
            measure,
            n_photons,
            a_min,
            a_max,
            steps,
            phase_sweep,
            out,
        } => {
            let steps = match steps {
                Some(s) => s,
                None => cfg.get_or("steps", 51)?,
            };
            let request = if phase_sweep {
                if measure != Measure::Coherent {
                    return Err(Error::InvalidParameter(
                        "--phase-sweep needs --measure c".into(),
                    ));
                }
                CurveRequest::phase(steps, n_photons)
            } else {
                let a_min = match a_min {
                    Some(a) => a,
                    None => cfg.get_or("a_min", 0.0)?,
                };
                let a_max = match a_max {
                    Some(a) => a,
                    None => cfg.get_or("a_max", 5.0)?,
                };
                CurveRequest::shift(measure, a_min, a_max, steps, n_photons)
            };
            let rows = compute_curve(&request, &spec, &constants)?;
            write_curve(&request, &rows, output(out.as_ref())?)?;
        }
        Command::Extension {
            measure,
            n_photons,
            threshold,
            bracket_max,
            out,
        } => {
            let threshold = match threshold {
                Some(t) => t,
                None => cfg.get_or("threshold", DEFAULT_THRESHOLD)?,
            };
            let bracket_max = match bracket_max {
                Some(b) => b,
                None => cfg.get_or("bracket_max", DEFAULT_BRACKET_MAX)?,
            };
            let mut rows = Vec::with_capacity(n_photons.len());
            for n in n_photons {
                let mut query = ExtensionQuery::new(measure, n).with_threshold(threshold);
                query.bracket_max = bracket_max;
                rows.push((n, extension(&query, &spec, &constants)?));
            }
            let mut w = output(out.as_ref())?;
            writeln!(w, "n_photons,extension_over_l")?;
            for (n, s) in rows {
                writeln!(w, "{},{}", format_g9(n), format_g9(s))?;
            }
            w.flush()?;
        }
        Command::Theta {
            transform,
            param,
            theta,
            phi,
        } => {
            let closed = theta_closed_form(transform, param, theta, phi)?;
            let t = PoincareTransform::from_kind(transform, param)?;
            let general = theta_general(&t, direction(theta, phi))?;
            let mut w = output(None)?;
            writeln!(w, "transform,param,theta,phi,wigner_phase,wigner_phase_general")?;
            writeln!(
                w,
                "{transform},{},{},{},{},{}",
                format_g9(param),
                format_g9(theta),
                format_g9(phi),
                format_g9(closed),
                format_g9(general)
            )?;
            w.flush()?;
        }
        Command::Verify { suite } => {
            let checks = verify::run(suite, &spec, &constants)?;
            let mut w = output(None)?;
            for check in &checks {
                writeln!(w, "{check}")?;
            }
            w.flush()?;
            if checks.iter().any(|c| !c.passed) {
                return Ok(EXIT_FAILURE);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
