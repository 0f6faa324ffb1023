//! Fidelity as a function of separation, the extension of a wave, and CSV curves.
//!
//! Distances are in units of the length scale `l` of the exponential family;
//! the pair at separation `a` is `f` and `f` translated by `a` along `z`.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::Vector3;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::format_g9;
use crate::momentum::{fidelity_c, fidelity_m, CoherentStateSpec, Measure};
use crate::position::fidelity_p;
use crate::quadrature::QuadratureSpec;
use crate::wavefunctions::{example_state, global_phase, translate, HelicityDoublet, PhysicalConstants};

pub const DEFAULT_THRESHOLD: f64 = 0.15;
pub const DEFAULT_BRACKET_MAX: f64 = 200.0;
/// Bisection stops once the bracket is narrower than this (units of `l`).
pub const ROOT_TOL: f64 = 1e-6;
/// First trial separation of the doubling search.
const BRACKET_START: f64 = 1.0 / 16.0;
/// Interior samples used to check monotonicity of a bracket.
const MONOTONE_SAMPLES: usize = 8;
/// Slack for quadrature noise in the monotonicity check.
const MONOTONE_SLACK: f64 = 1e-9;

/// The exponential-family pair at separation `a` (units of `l`).
pub fn shifted_pair(a: f64) -> Result<(HelicityDoublet, HelicityDoublet)> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "separation must be finite and non-negative, got {a}"
        )));
    }
    let f = example_state(1.0)?;
    let g = translate(&f, Vector3::new(0.0, 0.0, a));
    Ok((f, g))
}

fn check_photons(measure: Measure, mean_photons: f64) -> Result<()> {
    if measure == Measure::Coherent && !(mean_photons.is_finite() && mean_photons > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "mean photon number must be finite and positive, got {mean_photons}"
        )));
    }
    Ok(())
}

/// Fidelity of the pair at separation `a`; `mean_photons` is used by the coherent measure only.
pub fn fidelity_of_shift(
    a: f64,
    measure: Measure,
    mean_photons: f64,
    spec: &QuadratureSpec,
    constants: &PhysicalConstants,
) -> Result<f64> {
    check_photons(measure, mean_photons)?;
    let (f, g) = shifted_pair(a)?;
    if a == 0.0 {
        return Ok(1.0);
    }
    let report = match measure {
        Measure::Momentum => fidelity_m(&f, &g, spec)?,
        Measure::Position => fidelity_p(&f, &g, spec, constants)?,
        Measure::Coherent => fidelity_c(
            &CoherentStateSpec::new(f, mean_photons, 0.0)?,
            &CoherentStateSpec::new(g, mean_photons, 0.0)?,
            spec,
        )?,
    };
    Ok(report.value)
}

/// Coherent fidelity between `f` and `e^{iφ} f` at mean photon number `mean_photons`.
pub fn fidelity_of_phase(phi: f64, mean_photons: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_photons(Measure::Coherent, mean_photons)?;
    if !phi.is_finite() {
        return Err(Error::InvalidParameter(format!("phase must be finite, got {phi}")));
    }
    let f = example_state(1.0)?;
    let g = global_phase(&f, phi);
    let report = fidelity_c(
        &CoherentStateSpec::new(f, mean_photons, 0.0)?,
        &CoherentStateSpec::new(g, mean_photons, 0.0)?,
        spec,
    )?;
    Ok(report.value)
}

/// The separation at which the fidelity first drops to `threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionQuery {
    pub measure: Measure,
    pub mean_photons: f64,
    pub threshold: f64,
    /// Largest separation searched, in units of `l`.
    pub bracket_max: f64,
}

impl ExtensionQuery {
    pub fn new(measure: Measure, mean_photons: f64) -> Self {
        Self {
            measure,
            mean_photons,
            threshold: DEFAULT_THRESHOLD,
            bracket_max: DEFAULT_BRACKET_MAX,
        }
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "threshold must lie strictly between 0 and 1, got {}",
                self.threshold
            )));
        }
        if !(self.bracket_max.is_finite() && self.bracket_max > BRACKET_START) {
            return Err(Error::InvalidParameter(format!(
                "bracket_max must exceed {BRACKET_START}, got {}",
                self.bracket_max
            )));
        }
        check_photons(self.measure, self.mean_photons)
    }
}

/// Extension `s` (units of `l`): doubling search from `l/16` for a sign
/// change of `F(a) - threshold`, a sampled monotonicity check on the
/// bracket, then bisection to [`ROOT_TOL`].
pub fn extension(
    query: &ExtensionQuery,
    spec: &QuadratureSpec,
    constants: &PhysicalConstants,
) -> Result<f64> {
    query.validate()?;
    let excess = |a: f64| -> Result<f64> {
        Ok(fidelity_of_shift(a, query.measure, query.mean_photons, spec, constants)? - query.threshold)
    };

    let mut lo = 0.0;
    let mut hi = BRACKET_START;
    loop {
        if excess(hi)? <= 0.0 {
            break;
        }
        if hi >= query.bracket_max {
            return Err(Error::NoCrossing {
                threshold: query.threshold,
                bracket_max: query.bracket_max,
            });
        }
        lo = hi;
        hi = (2.0 * hi).min(query.bracket_max);
    }

    // Interior samples check monotonicity and narrow the bracket.
    let at = |i: usize| lo + (hi - lo) * i as f64 / (MONOTONE_SAMPLES + 1) as f64;
    let mut samples = vec![f64::INFINITY];
    for i in 1..=MONOTONE_SAMPLES {
        samples.push(excess(at(i))?);
    }
    samples.push(f64::NEG_INFINITY);
    if samples.windows(2).any(|w| w[1] > w[0] + MONOTONE_SLACK) {
        return Err(Error::AmbiguousRoot { lo, hi });
    }
    let first = samples.iter().position(|&e| e <= 0.0).unwrap_or(MONOTONE_SAMPLES + 1);
    (lo, hi) = (at(first - 1), at(first));

    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// What the abscissa of a curve is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Abscissa {
    /// Separation `a/l` of the shifted pair.
    Shift,
    /// Overall phase `φ` between `f` and `e^{iφ} f` (coherent measure).
    Phase,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRequest {
    pub measure: Measure,
    pub abscissa: Abscissa,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub mean_photons: f64,
}

impl CurveRequest {
    /// Separation sweep over `[a_min, a_max]` in units of `l`.
    pub fn shift(measure: Measure, a_min: f64, a_max: f64, steps: usize, mean_photons: f64) -> Self {
        Self {
            measure,
            abscissa: Abscissa::Shift,
            min: a_min,
            max: a_max,
            steps,
            mean_photons,
        }
    }

    /// Phase sweep over `[0, π]`.
    pub fn phase(steps: usize, mean_photons: f64) -> Self {
        Self {
            measure: Measure::Coherent,
            abscissa: Abscissa::Phase,
            min: 0.0,
            max: PI,
            steps,
            mean_photons,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::InvalidParameter(format!(
                "curve range must satisfy min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.abscissa == Abscissa::Shift && self.min < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "separation must be non-negative, got {}",
                self.min
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidParameter(format!(
                "curve needs at least 2 steps, got {}",
                self.steps
            )));
        }
        if self.abscissa == Abscissa::Phase && self.measure != Measure::Coherent {
            return Err(Error::InvalidParameter(
                "a phase sweep needs the coherent measure".into(),
            ));
        }
        check_photons(self.measure, self.mean_photons)
    }

    pub fn header(&self) -> &'static str {
        match self.abscissa {
            Abscissa::Shift => "a_over_l,fidelity",
            Abscissa::Phase => "phi,fidelity",
        }
    }

    /// Evenly spaced abscissas, endpoints included.
    pub fn abscissas(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / n as f64
                }
            })
            .collect()
    }
}

/// Evaluates the curve; points run in parallel and come back in abscissa order.
pub fn compute_curve(
    request: &CurveRequest,
    spec: &QuadratureSpec,
    constants: &PhysicalConstants,
) -> Result<Vec<(f64, f64)>> {
    request.validate()?;
    request
        .abscissas()
        .into_par_iter()
        .map(|x| {
            let y = match request.abscissa {
                Abscissa::Shift => {
                    fidelity_of_shift(x, request.measure, request.mean_photons, spec, constants)?
                }
                Abscissa::Phase => fidelity_of_phase(x, request.mean_photons, spec)?,
            };
            Ok((x, y))
        })
        .collect()
}

/// Writes the header and one `x,fidelity` row per point. Returns the number of rows.
pub fn write_curve<W: Write>(request: &CurveRequest, rows: &[(f64, f64)], mut out: W) -> Result<usize> {
    writeln!(out, "{}", request.header())?;
    for (i, (x, y)) in rows.iter().enumerate() {
        if let Err(source) = writeln!(out, "{},{}", format_g9(*x), format_g9(*y)) {
            return Err(Error::PartialOutput {
                rows_written: i,
                source,
            });
        }
    }
    if let Err(source) = out.flush() {
        return Err(Error::PartialOutput {
            rows_written: rows.len(),
            source,
        });
    }
    Ok(rows.len())
}

/// [`compute_curve`] followed by [`write_curve`].
pub fn emit_curve<W: Write>(
    request: &CurveRequest,
    spec: &QuadratureSpec,
    constants: &PhysicalConstants,
    out: W,
) -> Result<usize> {
    let rows = compute_curve(request, spec, constants)?;
    write_curve(request, &rows, out)
}
