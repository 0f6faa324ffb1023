//! Relativistic inner product, momentum fidelity, overlap phase and the
//! fidelity of coherent states built on one-photon wave functions.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_spherical, Integral, QuadratureSpec, Symmetry};
use crate::wavefunctions::{Helicity, HelicityDoublet};

/// Norms below this value are treated as zero.
pub const ZERO_NORM_TOL: f64 = 1e-12;
/// Normalized overlaps below this modulus have no meaningful phase.
pub const PHASE_TOL: f64 = 1e-10;
/// Allowed deviation from unit norm for coherent-state wave functions.
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// Which fidelity a value refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    /// Overlap under the invariant `d³k/k` measure.
    Momentum,
    /// Overlap of position wave functions under `d³r`.
    Position,
    /// Overlap of coherent states of the quantized field.
    Coherent,
}

impl Measure {
    pub fn tag(self) -> &'static str {
        match self {
            Measure::Momentum => "m",
            Measure::Position => "p",
            Measure::Coherent => "c",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m" => Ok(Measure::Momentum),
            "p" => Ok(Measure::Position),
            "c" => Ok(Measure::Coherent),
            other => Err(Error::InvalidParameter(format!(
                "measure must be one of m, p, c; got {other:?}"
            ))),
        }
    }
}

/// A fidelity value together with what it took to compute it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityReport {
    pub value: f64,
    pub measure: Measure,
    /// Propagated quadrature error of `value`.
    pub numerical_error: f64,
    pub norm1: f64,
    pub norm2: f64,
    /// Set when a coherent pair had different mean photon numbers and the
    /// general overlap formula was used.
    pub generalized: bool,
}

/// `Σ_λ ∫ d³k |k|^{-power} f₁λ*(k) f₂λ(k)` with node counts tuned to the pair.
pub(crate) fn pair_integral(
    f1: &HelicityDoublet,
    f2: &HelicityDoublet,
    power: u8,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let decay = 0.5 * (f1.length_scale() + f2.length_scale());
    let tuned = spec.tuned(decay, f1.oscillation_extent(f2));
    let symmetry = if f1.axial_symmetry() && f2.axial_symmetry() {
        Symmetry::Axial
    } else {
        Symmetry::None
    };

    let mut total = Integral {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        refinements: 0,
        evaluations: 0,
    };
    for h in Helicity::BOTH {
        let (Some(a), Some(b)) = (f1.component(h), f2.component(h)) else {
            continue;
        };
        let part = integrate_spherical(|k| a(k).conj() * b(k), power, symmetry, &tuned)?;
        total.value += part.value;
        total.error += part.error;
        total.refinements = total.refinements.max(part.refinements);
        total.evaluations += part.evaluations;
    }
    Ok(total)
}

/// `⟨f₁|f₂⟩ = Σ_λ ∫ d³k/k f₁λ* f₂λ`.
pub fn inner_product_m(
    f1: &HelicityDoublet,
    f2: &HelicityDoublet,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    pair_integral(f1, f2, 1, spec)
}

/// `⟨f|f⟩` under the `d³k/k` measure (the squared norm).
pub fn norm_m(f: &HelicityDoublet, spec: &QuadratureSpec) -> Result<f64> {
    Ok(inner_product_m(f, f, spec)?.value.re)
}

/// Normalized squared overlap `|⟨a|b⟩|² / (⟨a|a⟩⟨b|b⟩)` from three integrals.
pub(crate) fn report_from_integrals(
    overlap: &Integral,
    n1: &Integral,
    n2: &Integral,
    measure: Measure,
) -> Result<FidelityReport> {
    let (a, b) = (n1.value.re, n2.value.re);
    for norm in [a, b] {
        if !(norm > ZERO_NORM_TOL) {
            return Err(Error::DegenerateState { norm });
        }
    }
    let modulus = overlap.value.norm();
    let value = modulus * modulus / (a * b);
    let numerical_error =
        2.0 * modulus * overlap.error / (a * b) + value * (n1.error / a + n2.error / b);
    Ok(FidelityReport {
        value,
        measure,
        numerical_error,
        norm1: a,
        norm2: b,
        generalized: false,
    })
}

/// Momentum fidelity `|⟨f₁|f₂⟩|² / (⟨f₁|f₁⟩⟨f₂|f₂⟩)`. Inputs need not be normalized.
pub fn fidelity_m(
    f1: &HelicityDoublet,
    f2: &HelicityDoublet,
    spec: &QuadratureSpec,
) -> Result<FidelityReport> {
    let n1 = inner_product_m(f1, f1, spec)?;
    let n2 = inner_product_m(f2, f2, spec)?;
    let overlap = inner_product_m(f1, f2, spec)?;
    report_from_integrals(&overlap, &n1, &n2, Measure::Momentum)
}

/// Principal argument in `(-π, π]`.
pub fn principal_arg(z: Complex64) -> f64 {
    let arg = z.arg();
    if arg <= -PI {
        PI
    } else {
        arg
    }
}

/// Phase `arg⟨f₁|f₂⟩` in `(-π, π]`.
pub fn phase_diff(f1: &HelicityDoublet, f2: &HelicityDoublet, spec: &QuadratureSpec) -> Result<f64> {
    let n1 = norm_m(f1, spec)?;
    let n2 = norm_m(f2, spec)?;
    for norm in [n1, n2] {
        if !(norm > ZERO_NORM_TOL) {
            return Err(Error::DegenerateState { norm });
        }
    }
    let overlap = inner_product_m(f1, f2, spec)?.value;
    let normalized = overlap.norm() / (n1 * n2).sqrt();
    if !(normalized > PHASE_TOL) {
        return Err(Error::UndefinedPhase { overlap: normalized });
    }
    Ok(principal_arg(overlap))
}

/// A coherent state whose one-photon mode is `wavefunction`, with mean
/// photon number `mean_photons` and overall phase `overall_phase`.
#[derive(Debug, Clone)]
pub struct CoherentStateSpec {
    pub wavefunction: HelicityDoublet,
    pub mean_photons: f64,
    pub overall_phase: f64,
}

impl CoherentStateSpec {
    pub fn new(wavefunction: HelicityDoublet, mean_photons: f64, overall_phase: f64) -> Result<Self> {
        if !(mean_photons.is_finite() && mean_photons >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mean photon number must be finite and non-negative, got {mean_photons}"
            )));
        }
        if !overall_phase.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "overall phase must be finite, got {overall_phase}"
            )));
        }
        Ok(Self {
            wavefunction,
            mean_photons,
            overall_phase,
        })
    }
}

/// `exp[-2N(1 - cos φ √F_m)]` for two coherent states with a common mean
/// photon number `N`, overlap phase `φ` and one-photon fidelity `F_m`.
pub fn coherent_fidelity(mean_photons: f64, phase: f64, fidelity_m: f64) -> f64 {
    (-2.0 * mean_photons * (1.0 - phase.cos() * fidelity_m.sqrt())).exp()
}

/// `|⟨α|β⟩|² = exp[-N₁ - N₂ + 2√(N₁N₂) Re w]`, where `w` is the one-photon
/// overlap including the overall phases, `w = e^{i(φ₂-φ₁)}⟨f₁|f₂⟩`.
pub fn coherent_fidelity_general(n1: f64, n2: f64, overlap: Complex64) -> f64 {
    (-n1 - n2 + 2.0 * (n1 * n2).sqrt() * overlap.re).exp()
}

/// Fidelity of two coherent states. Both wave functions must be normalized.
pub fn fidelity_c(
    c1: &CoherentStateSpec,
    c2: &CoherentStateSpec,
    spec: &QuadratureSpec,
) -> Result<FidelityReport> {
    let n1 = inner_product_m(&c1.wavefunction, &c1.wavefunction, spec)?;
    let n2 = inner_product_m(&c2.wavefunction, &c2.wavefunction, spec)?;
    for n in [&n1, &n2] {
        let norm = n.value.re;
        if !(norm > ZERO_NORM_TOL) {
            return Err(Error::DegenerateState { norm });
        }
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm });
        }
    }
    let overlap = inner_product_m(&c1.wavefunction, &c2.wavefunction, spec)?;
    let w = overlap.value * Complex64::cis(c2.overall_phase - c1.overall_phase);

    let (na, nb) = (c1.mean_photons, c2.mean_photons);
    let generalized = na != nb;
    let value = if generalized {
        coherent_fidelity_general(na, nb, w)
    } else {
        coherent_fidelity(na, principal_arg(w), w.norm().powi(2))
    };
    let numerical_error = value * 2.0 * (na * nb).sqrt() * overlap.error;
    Ok(FidelityReport {
        value,
        measure: Measure::Coherent,
        numerical_error,
        norm1: n1.value.re,
        norm2: n2.value.re,
        generalized,
    })
}
