//! The transverse circular polarization vector `e(k)`.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::wavefunctions::Helicity;

/// `k_x² + k_y²` below this fraction of `|k|²` counts as lying on the `k_z` axis.
pub const AXIS_TOL: f64 = 1e-24;

/// `e₊(k) = e(k)`, `e₋(k) = e*(k)` with
/// `e(k) = [-k_x k_z + i k_y k, -k_y k_z - i k_x k, k_x² + k_y²] / √(2k²(k_x² + k_y²))`.
///
/// Unit norm, transverse, and an eigenvector of `k̂×` with eigenvalue `-i`
/// (positive helicity). Undefined on the `k_z` axis.
pub fn polarization_vector(k: Vector3<f64>, helicity: Helicity) -> Result<Vector3<Complex64>> {
    let perp = k.x * k.x + k.y * k.y;
    let k2 = perp + k.z * k.z;
    if !(perp > AXIS_TOL * k2) {
        return Err(Error::AxisSingularity {
            kx: k.x,
            ky: k.y,
            kz: k.z,
        });
    }
    let e = polarization_unchecked(k);
    Ok(match helicity {
        Helicity::Plus => e,
        Helicity::Minus => e.map(|c| c.conj()),
    })
}

/// `e(k)` without the axis check; callers guarantee `k_x² + k_y² > 0`.
pub(crate) fn polarization_unchecked(k: Vector3<f64>) -> Vector3<Complex64> {
    let perp = k.x * k.x + k.y * k.y;
    let kn = (perp + k.z * k.z).sqrt();
    let norm = 1.0 / (2.0 * kn * kn * perp).sqrt();
    Vector3::new(
        Complex64::new(-k.x * k.z, k.y * kn) * norm,
        Complex64::new(-k.y * k.z, -k.x * kn) * norm,
        Complex64::new(perp * norm, 0.0),
    )
}

#[cfg(test)]
/// Unconjugated bilinear product `a·b`.
pub(crate) fn dot_c(a: &Vector3<Complex64>, b: &Vector3<Complex64>) -> Complex64 {
    a.x * b.x + a.y * b.y + a.z * b.z
}

/// Hermitian product `a*·b`.
pub(crate) fn hdot(a: &Vector3<Complex64>, b: &Vector3<Complex64>) -> Complex64 {
    a.x.conj() * b.x + a.y.conj() * b.y + a.z.conj() * b.z
}
