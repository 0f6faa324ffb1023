//! The nonlocal form of the relativistic inner product in position space,
//! `(1/2π²) Σ_λ ∬ d³r d³r′ Ψ₁λ*(r)·Ψ₂λ(r′) / |r - r′|²`, by direct double sum.
//!
//! The kernel is the Fourier transform of `1/|k|`, so for fields resolved on
//! the grid this reproduces `ħc ⟨f₁|f₂⟩`. It is an O(N²) oracle for small grids.

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::position::grid::{PositionField, PositionState, SpatialGrid};
use crate::position::polarization::hdot;
use crate::quadrature::pairwise_sum;
use crate::wavefunctions::PhysicalConstants;

/// Largest grid accepted by the double sum.
pub const MAX_NONLOCAL_POINTS: usize = 24 * 24 * 24;

/// `1/|r - r′|²` indexed by the absolute cell offsets. The coincident cell
/// takes the value at a half-cell offset, `4/h²`.
fn kernel_table(grid: &SpatialGrid) -> Vec<f64> {
    let [nx, ny, nz] = grid.points;
    let h = [grid.spacing(0), grid.spacing(1), grid.spacing(2)];
    let mut table = vec![0.0; nx * ny * nz];
    for di in 0..nx {
        for dj in 0..ny {
            for dk in 0..nz {
                let d = Vector3::new(di as f64 * h[0], dj as f64 * h[1], dk as f64 * h[2]);
                table[(di * ny + dj) * nz + dk] = if di == 0 && dj == 0 && dk == 0 {
                    let hm = (h[0] * h[1] * h[2]).cbrt();
                    4.0 / (hm * hm)
                } else {
                    1.0 / d.norm_squared()
                };
            }
        }
    }
    table
}

fn field_nonlocal(a: &PositionField, b: &PositionField, table: &[f64]) -> Complex64 {
    let grid = &a.grid;
    let [_, ny, nz] = grid.points;
    let weighted_a: Vec<_> = (0..grid.len()).map(|i| a.values[i] * Complex64::new(grid.weight(i), 0.0)).collect();
    let weighted_b: Vec<_> = (0..grid.len()).map(|i| b.values[i] * Complex64::new(grid.weight(i), 0.0)).collect();
    let rows: Vec<Complex64> = (0..grid.len())
        .into_par_iter()
        .map(|p| {
            let [i, j, k] = grid.unravel(p);
            let terms: Vec<Complex64> = (0..grid.len())
                .map(|q| {
                    let [i2, j2, k2] = grid.unravel(q);
                    let t = table[(i.abs_diff(i2) * ny + j.abs_diff(j2)) * nz + k.abs_diff(k2)];
                    hdot(&weighted_a[p], &weighted_b[q]) * t
                })
                .collect();
            pairwise_sum(&terms)
        })
        .collect();
    pairwise_sum(&rows) / (2.0 * PI * PI)
}

/// Direct double sum of the nonlocal inner product over both helicities.
pub fn nonlocal_inner_product(s1: &PositionState, s2: &PositionState) -> Result<Complex64> {
    if !s1.grid.compatible(&s2.grid) {
        return Err(Error::IncompatibleGrid);
    }
    let points = s1.grid.len();
    if points > MAX_NONLOCAL_POINTS {
        return Err(Error::ResourceLimit {
            points,
            limit: MAX_NONLOCAL_POINTS,
        });
    }
    let table = kernel_table(&s1.grid);
    let mut total = Complex64::new(0.0, 0.0);
    for (a, b) in s1.components().into_iter().zip(s2.components()) {
        if let (Some(a), Some(b)) = (a, b) {
            total += field_nonlocal(a, b, &table);
        }
    }
    Ok(total)
}

/// Photon number `(1/ħc)` times the nonlocal self-product; 1 for a normalized state.
pub fn photon_number(state: &PositionState, constants: &PhysicalConstants) -> Result<f64> {
    constants.validate()?;
    Ok(nonlocal_inner_product(state, state)?.re / constants.hbar_c)
}
