//! The Whittaker construction of Maxwell fields from a scalar wave, and the
//! finite-difference residual of the Schrödinger form of Maxwell's equations,
//! `i∂F/∂t = c∇×F`, `∇·F = 0`.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::position::grid::{FieldKind, PositionField, SpatialGrid};
use crate::wavefunctions::PhysicalConstants;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Second derivatives of a scalar wave `χ(r, t)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ScalarDerivatives {
    pub xx: Complex64,
    pub yy: Complex64,
    pub xz: Complex64,
    pub yz: Complex64,
    pub xt: Complex64,
    pub yt: Complex64,
}

/// A solution of the d'Alembert equation with the derivatives the
/// Whittaker construction needs.
pub trait ScalarWave: Sync {
    fn derivatives(&self, r: Vector3<f64>, t: f64) -> ScalarDerivatives;
}

/// `χ = A e^{i(k·r - ωt)}` with `ω = c|k|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub k: Vector3<f64>,
    pub amplitude: Complex64,
    pub c: f64,
}

impl ScalarWave for PlaneWave {
    fn derivatives(&self, r: Vector3<f64>, t: f64) -> ScalarDerivatives {
        let omega = self.c * self.k.norm();
        let chi = self.amplitude * Complex64::cis(self.k.dot(&r) - omega * t);
        let k = self.k;
        // ∂_a → i k_a, ∂_t → -iω
        ScalarDerivatives {
            xx: -chi * k.x * k.x,
            yy: -chi * k.y * k.y,
            xz: -chi * k.x * k.z,
            yz: -chi * k.y * k.z,
            xt: chi * k.x * omega,
            yt: chi * k.y * omega,
        }
    }
}

/// A scalar wave given only by its values; derivatives by central
/// differences with step `step` in space and `step / c` in time.
pub struct SampledWave<F> {
    pub chi: F,
    pub step: f64,
    pub c: f64,
}

impl<F> ScalarWave for SampledWave<F>
where
    F: Fn(Vector3<f64>, f64) -> Complex64 + Sync,
{
    fn derivatives(&self, r: Vector3<f64>, t: f64) -> ScalarDerivatives {
        let h = self.step;
        let dt = h / self.c;
        let e = |a: usize| Vector3::from_fn(|i, _| if i == a { h } else { 0.0 });
        let chi = |r: Vector3<f64>, t: f64| (self.chi)(r, t);
        let second = |a: usize| (chi(r + e(a), t) - chi(r, t) * 2.0 + chi(r - e(a), t)) / (h * h);
        let mixed = |a: usize, b: usize| {
            (chi(r + e(a) + e(b), t) - chi(r + e(a) - e(b), t) - chi(r - e(a) + e(b), t)
                + chi(r - e(a) - e(b), t))
                / (4.0 * h * h)
        };
        let with_time = |a: usize| {
            (chi(r + e(a), t + dt) - chi(r + e(a), t - dt) - chi(r - e(a), t + dt)
                + chi(r - e(a), t - dt))
                / (4.0 * h * dt)
        };
        ScalarDerivatives {
            xx: second(0),
            yy: second(1),
            xz: mixed(0, 2),
            yz: mixed(1, 2),
            xt: with_time(0),
            yt: with_time(1),
        }
    }
}

/// `F = [∂x∂z + (i/c)∂y∂t, ∂y∂z - (i/c)∂x∂t, -∂x² - ∂y²] χ` on the grid at `grid.time`.
pub fn whittaker_field<W: ScalarWave + ?Sized>(
    chi: &W,
    grid: &SpatialGrid,
    constants: &PhysicalConstants,
) -> Result<PositionField> {
    constants.validate()?;
    let c = constants.c;
    let t = grid.time;
    Ok(PositionField::from_fn(grid, FieldKind::RiemannSilberstein, |r| {
        let d = chi.derivatives(r, t);
        Vector3::new(d.xz + I * d.yt / c, d.yz - I * d.xt / c, -d.xx - d.yy)
    }))
}

/// Max-norm residuals of the field equations over interior grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxwellResidual {
    /// `max |i∂F/∂t - c∇×F|`.
    pub curl: f64,
    /// `max |∇·F|`.
    pub divergence: f64,
}

impl MaxwellResidual {
    pub fn total(&self) -> f64 {
        self.curl + self.divergence
    }
}

/// Residual of `i∂F/∂t = c∇×F` and `∇·F = 0` with second-order central
/// differences; the outermost layer of points is excluded.
pub fn maxwell_residual(
    field: &PositionField,
    time_derivative: &PositionField,
    constants: &PhysicalConstants,
) -> Result<MaxwellResidual> {
    constants.validate()?;
    let grid = &field.grid;
    if !grid.compatible(&time_derivative.grid) {
        return Err(Error::IncompatibleGrid);
    }
    let [nx, ny, nz] = grid.points;
    let h = [grid.spacing(0), grid.spacing(1), grid.spacing(2)];
    let mut curl_max: f64 = 0.0;
    let mut div_max: f64 = 0.0;
    for i in 1..nx - 1 {
        for j in 1..ny - 1 {
            for k in 1..nz - 1 {
                // d[a][b] = ∂_a F_b
                let diff = |a: usize, b: usize| {
                    let (p, m) = match a {
                        0 => (field.at(i + 1, j, k), field.at(i - 1, j, k)),
                        1 => (field.at(i, j + 1, k), field.at(i, j - 1, k)),
                        _ => (field.at(i, j, k + 1), field.at(i, j, k - 1)),
                    };
                    (p[b] - m[b]) / (2.0 * h[a])
                };
                let curl = Vector3::new(
                    diff(1, 2) - diff(2, 1),
                    diff(2, 0) - diff(0, 2),
                    diff(0, 1) - diff(1, 0),
                );
                let dt = time_derivative.at(i, j, k);
                let res = dt * I - curl * Complex64::new(constants.c, 0.0);
                curl_max = curl_max.max(res.norm());
                div_max = div_max.max((diff(0, 0) + diff(1, 1) + diff(2, 2)).norm());
            }
        }
    }
    Ok(MaxwellResidual {
        curl: curl_max,
        divergence: div_max,
    })
}

/// `∂F/∂t` of a Whittaker field by central differences in time (step `dt`).
pub fn whittaker_time_derivative<W: ScalarWave + ?Sized>(
    chi: &W,
    grid: &SpatialGrid,
    constants: &PhysicalConstants,
    dt: f64,
) -> Result<PositionField> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
    }
    let later = whittaker_field(chi, &grid.with_time(grid.time + dt), constants)?;
    let earlier = whittaker_field(chi, &grid.with_time(grid.time - dt), constants)?;
    Ok(PositionField {
        values: later
            .values
            .iter()
            .zip(&earlier.values)
            .map(|(a, b)| (a - b) / Complex64::new(2.0 * dt, 0.0))
            .collect(),
        grid: grid.clone(),
        kind: FieldKind::RiemannSilberstein,
        error: 0.0,
    })
}
