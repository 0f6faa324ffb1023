//! Local inner product of position wave functions and the position fidelity.
//!
//! Substituting the plane-wave synthesis into `Σ_λ ∫ d³r Ψ₁λ*·Ψ₂λ` and using
//! `|e(k)|² = 1` gives `ħc Σ_λ ∫ d³k f₁λ* f₂λ`: the same overlap as in
//! momentum space but with the plain `d³k` measure. That reduction is the
//! primary path; the grid sum exists to check it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::momentum::{pair_integral, report_from_integrals, FidelityReport, Measure};
use crate::position::grid::{PositionField, PositionState};
use crate::position::polarization::hdot;
use crate::position::synthesis::synthesize_state;
use crate::position::SpatialGrid;
use crate::quadrature::{pairwise_sum, Integral, QuadratureSpec};
use crate::wavefunctions::{HelicityDoublet, PhysicalConstants};

/// `ħc Σ_λ ∫ d³k f₁λ* f₂λ`, the momentum-side form of the local inner product.
pub fn parseval_inner_product(
    f1: &HelicityDoublet,
    f2: &HelicityDoublet,
    spec: &QuadratureSpec,
    constants: &PhysicalConstants,
) -> Result<Integral> {
    constants.validate()?;
    let mut i = pair_integral(f1, f2, 0, spec)?;
    i.value *= constants.hbar_c;
    i.error *= constants.hbar_c;
    Ok(i)
}

fn field_inner(a: &PositionField, b: &PositionField) -> Result<Complex64> {
    if !a.grid.compatible(&b.grid) {
        return Err(Error::IncompatibleGrid);
    }
    let terms: Vec<Complex64> = a
        .values
        .iter()
        .zip(&b.values)
        .enumerate()
        .map(|(idx, (x, y))| hdot(x, y) * a.grid.weight(idx))
        .collect();
    Ok(pairwise_sum(&terms))
}

/// `Σ_λ ∫ d³r Ψ₁λ*·Ψ₂λ` by the composite trapezoid rule of the grid.
pub fn inner_product_p(s1: &PositionState, s2: &PositionState) -> Result<Complex64> {
    if !s1.grid.compatible(&s2.grid) {
        return Err(Error::IncompatibleGrid);
    }
    let mut total = Complex64::new(0.0, 0.0);
    for (a, b) in s1.components().into_iter().zip(s2.components()) {
        if let (Some(a), Some(b)) = (a, b) {
            total += field_inner(a, b)?;
        }
    }
    Ok(total)
}

/// Position fidelity through the `d³k` reduction.
pub fn fidelity_p(
    f1: &HelicityDoublet,
    f2: &HelicityDoublet,
    spec: &QuadratureSpec,
    constants: &PhysicalConstants,
) -> Result<FidelityReport> {
    let n1 = parseval_inner_product(f1, f1, spec, constants)?;
    let n2 = parseval_inner_product(f2, f2, spec, constants)?;
    let overlap = parseval_inner_product(f1, f2, spec, constants)?;
    report_from_integrals(&overlap, &n1, &n2, Measure::Position)
}

/// Position fidelity from wave functions synthesized on `grid`.
pub fn fidelity_p_grid(
    f1: &HelicityDoublet,
    f2: &HelicityDoublet,
    grid: &SpatialGrid,
    spec: &QuadratureSpec,
    constants: &PhysicalConstants,
) -> Result<FidelityReport> {
    let s1 = synthesize_state(f1, grid, spec, constants)?;
    let s2 = synthesize_state(f2, grid, spec, constants)?;
    let as_integral = |value: Complex64| Integral {
        value,
        error: 0.0,
        refinements: 0,
        evaluations: grid.len(),
    };
    let n1 = as_integral(inner_product_p(&s1, &s1)?);
    let n2 = as_integral(inner_product_p(&s2, &s2)?);
    let overlap = as_integral(inner_product_p(&s1, &s2)?);
    report_from_integrals(&overlap, &n1, &n2, Measure::Position)
}
