//! Rotations and boosts acting on photon wave functions.
//!
//! A transform carries a Lorentz matrix `Λ` acting on `(|k|, k)`, so that
//! `k′ = Λk`, and the complex orthogonal matrix `O₊` that acts on the RS
//! vector (`O₋ = O₊*`). Under the transform the amplitudes pick up the Wigner
//! phase: `f′±(k′) = e^{±iΘ(k)} f±(k)`, where
//!
//! `e^{-iΘ(k)} = (k′/k) e*(k)·O₊ᵀ e(k′)`.
//!
//! Rotations are passive: rotating by `α` about `n̂` maps `k ↦ R(n̂, α)ᵀ k`
//! with `O = R(n̂, α)ᵀ`. A boost with rapidity `ξ` along `n̂` uses the active
//! rotation matrix about `n̂` continued to the imaginary angle `iξ`, which
//! mixes `E` and `B` inside `E + iB`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::position::polarization::{polarization_unchecked, polarization_vector};
use crate::wavefunctions::{Amplitude, Helicity, HelicityDoublet};

/// Unimodularity is checked to this tolerance before the phase is taken.
pub const UNIMODULAR_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    RotationY,
    BoostY,
    General,
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rotation-y" => Ok(TransformKind::RotationY),
            "boost-y" => Ok(TransformKind::BoostY),
            other => Err(Error::InvalidParameter(format!(
                "transform must be rotation-y or boost-y, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransformKind::RotationY => "rotation-y",
            TransformKind::BoostY => "boost-y",
            TransformKind::General => "general",
        })
    }
}

/// A homogeneous Lorentz transformation together with its field matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PoincareTransform {
    pub kind: TransformKind,
    /// Rotation angle in radians or boost velocity in units of `c`.
    pub parameter: f64,
    /// Acts on `(|k|, k_x, k_y, k_z)`.
    pub lorentz: Matrix4<f64>,
    lorentz_inverse: Matrix4<f64>,
    /// `O₊`; the negative helicity uses the complex conjugate.
    pub field_plus: Matrix3<Complex64>,
}

fn real_to_complex(m: &Matrix3<f64>) -> Matrix3<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

fn cross_matrix(n: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -n.z, n.y, n.z, 0.0, -n.x, -n.y, n.x, 0.0)
}

/// Active rotation by `angle` about the unit vector `n`.
fn rotation_matrix(n: &Vector3<f64>, angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::identity() * c + cross_matrix(n) * s + n * n.transpose() * (1.0 - c)
}

fn unit(axis: Vector3<f64>) -> Result<Vector3<f64>> {
    let norm = axis.norm();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "axis must be a nonzero finite vector, got {axis:?}"
        )));
    }
    Ok(axis / norm)
}

impl PoincareTransform {
    /// Builds a transform from its parts; `lorentz` must be invertible.
    pub fn new(
        kind: TransformKind,
        parameter: f64,
        lorentz: Matrix4<f64>,
        field_plus: Matrix3<Complex64>,
    ) -> Result<Self> {
        let lorentz_inverse = lorentz.try_inverse().ok_or_else(|| {
            Error::InvalidParameter("Lorentz matrix is singular".into())
        })?;
        Ok(Self {
            kind,
            parameter,
            lorentz,
            lorentz_inverse,
            field_plus,
        })
    }

    pub fn identity() -> Self {
        Self::new(
            TransformKind::General,
            0.0,
            Matrix4::identity(),
            Matrix3::identity().map(|x: f64| Complex64::new(x, 0.0)),
        )
        .expect("identity is invertible")
    }

    /// Rotation by `angle` about `axis`.
    pub fn rotation(axis: Vector3<f64>, angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::InvalidParameter(format!("angle must be finite, got {angle}")));
        }
        let n = unit(axis)?;
        let r = rotation_matrix(&n, angle).transpose();
        let mut lorentz = Matrix4::identity();
        lorentz.fixed_view_mut::<3, 3>(1, 1).copy_from(&r);
        Self::new(TransformKind::General, angle, lorentz, real_to_complex(&r))
    }

    pub fn rotation_y(alpha: f64) -> Result<Self> {
        let mut t = Self::rotation(Vector3::y(), alpha)?;
        t.kind = TransformKind::RotationY;
        Ok(t)
    }

    /// Boost with velocity `beta` (in units of `c`) along `direction`.
    pub fn boost(direction: Vector3<f64>, beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta.abs() < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "boost velocity must satisfy |v| < c, got {beta} c"
            )));
        }
        let n = unit(direction)?;
        let gamma = 1.0 / (1.0 - beta * beta).sqrt();
        let mut lorentz = Matrix4::identity();
        lorentz[(0, 0)] = gamma;
        let spatial = Matrix3::identity() + n * n.transpose() * (gamma - 1.0);
        lorentz.fixed_view_mut::<3, 3>(1, 1).copy_from(&spatial);
        for a in 0..3 {
            lorentz[(0, a + 1)] = gamma * beta * n[a];
            lorentz[(a + 1, 0)] = gamma * beta * n[a];
        }
        // R(n, iξ): cos(iξ) = γ, sin(iξ) = iβγ.
        let field_plus = Matrix3::identity().map(|x: f64| Complex64::new(x * gamma, 0.0))
            + real_to_complex(&cross_matrix(&n)) * Complex64::new(0.0, beta * gamma)
            + real_to_complex(&(n * n.transpose())) * Complex64::new(1.0 - gamma, 0.0);
        Self::new(TransformKind::General, beta, lorentz, field_plus)
    }

    pub fn boost_y(beta: f64) -> Result<Self> {
        let mut t = Self::boost(Vector3::y(), beta)?;
        t.kind = TransformKind::BoostY;
        Ok(t)
    }

    pub fn from_kind(kind: TransformKind, parameter: f64) -> Result<Self> {
        match kind {
            TransformKind::RotationY => Self::rotation_y(parameter),
            TransformKind::BoostY => Self::boost_y(parameter),
            TransformKind::General => Err(Error::InvalidParameter(
                "a general transform needs explicit matrices".into(),
            )),
        }
    }

    /// Field matrix for one helicity.
    pub fn field_matrix(&self, helicity: Helicity) -> Matrix3<Complex64> {
        match helicity {
            Helicity::Plus => self.field_plus,
            Helicity::Minus => self.field_plus.map(|c| c.conj()),
        }
    }

    fn apply4(m: &Matrix4<f64>, k: &Vector3<f64>) -> Vector3<f64> {
        let out = m * Vector4::new(k.norm(), k.x, k.y, k.z);
        Vector3::new(out[1], out[2], out[3])
    }

    /// `k′ = Λk`.
    pub fn momentum_map(&self, k: Vector3<f64>) -> Vector3<f64> {
        Self::apply4(&self.lorentz, &k)
    }

    /// `k = Λ⁻¹k′`.
    pub fn inverse_momentum_map(&self, k_prime: Vector3<f64>) -> Vector3<f64> {
        Self::apply4(&self.lorentz_inverse, &k_prime)
    }

    /// The frequency factor `k′⁰/|k|` of the map, which equals `|k′|/|k|` on the light cone.
    pub fn frequency_ratio(&self, k: Vector3<f64>) -> f64 {
        let out = self.lorentz * Vector4::new(k.norm(), k.x, k.y, k.z);
        out[0] / k.norm()
    }

    /// `(k′/k) e*(k)·O₊ᵀ e(k′)`, without axis checks.
    fn wigner_factor_unchecked(&self, k: Vector3<f64>) -> Complex64 {
        let kp = self.momentum_map(k);
        let e = polarization_unchecked(k);
        let ep = polarization_unchecked(kp);
        let rotated = self.field_plus.transpose() * ep;
        let dot: Complex64 = e.iter().zip(rotated.iter()).map(|(a, b)| a.conj() * b).sum();
        dot * (kp.norm() / k.norm())
    }

    /// `(k′/k) e*(k)·O₊ᵀ e(k′)`, which has unit modulus for a consistent transform.
    pub fn wigner_factor(&self, k: Vector3<f64>) -> Result<Complex64> {
        polarization_vector(k, Helicity::Plus)?;
        polarization_vector(self.momentum_map(k), Helicity::Plus)?;
        Ok(self.wigner_factor_unchecked(k))
    }
}

/// Wigner phase `Θ(k)` from the general formula.
pub fn theta_general(transform: &PoincareTransform, k: Vector3<f64>) -> Result<f64> {
    let w = transform.wigner_factor(k)?;
    let modulus = w.norm();
    if (modulus - 1.0).abs() > UNIMODULAR_TOL {
        return Err(Error::InconsistentTransform { modulus });
    }
    Ok(-w.arg())
}

fn two_argument(num: f64, den: f64) -> Result<f64> {
    if num == 0.0 && den == 0.0 {
        return Err(Error::BranchUndefined);
    }
    Ok(num.atan2(den))
}

/// `Θ` for a rotation by `alpha` about `y`, at the direction `(θ, φ)`:
/// `atan2(sin α sin φ, cos α sin θ - sin α cos φ cos θ)`, the two-argument
/// form of `arctan[sin φ / (cot α sin θ - cos φ cos θ)]`.
pub fn theta_rotation_y(alpha: f64, theta: f64, phi: f64) -> Result<f64> {
    let (sa, ca) = alpha.sin_cos();
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    two_argument(sa * sp, ca * st - sa * cp * ct)
}

/// `Θ` for a boost with velocity `beta` (units of `c`) along `y`:
/// `atan2(β cos φ cos θ, sin θ + β sin φ)`.
pub fn theta_boost_y(beta: f64, theta: f64, phi: f64) -> Result<f64> {
    if !(beta.is_finite() && beta.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "boost velocity must satisfy |v| < c, got {beta} c"
        )));
    }
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    two_argument(beta * cp * ct, st + beta * sp)
}

/// Closed-form `Θ` for the two named transforms.
pub fn theta_closed_form(kind: TransformKind, parameter: f64, theta: f64, phi: f64) -> Result<f64> {
    match kind {
        TransformKind::RotationY => theta_rotation_y(parameter, theta, phi),
        TransformKind::BoostY => theta_boost_y(parameter, theta, phi),
        TransformKind::General => Err(Error::InvalidParameter(
            "no closed form for a general transform".into(),
        )),
    }
}

/// Unit wave vector of direction `(θ, φ)`.
pub fn direction(theta: f64, phi: f64) -> Vector3<f64> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Vector3::new(st * cp, st * sp, ct)
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y <= -PI {
        PI
    } else {
        y
    }
}

/// The transformed state: `f′±(k′) = e^{±iΘ(k)} f±(k)` with `k = Λ⁻¹k′`.
///
/// On the measure-zero set where `k` or `k′` lies on the `k_z` axis the phase
/// is undefined and taken as zero.
pub fn apply_transform(f: &HelicityDoublet, transform: &PoincareTransform) -> HelicityDoublet {
    let shared = Arc::new(transform.clone());
    let wrap = |h: Helicity, amp: Amplitude| -> Amplitude {
        let t = Arc::clone(&shared);
        Arc::new(move |kp: Vector3<f64>| {
            let k = t.inverse_momentum_map(kp);
            let w = t.wigner_factor_unchecked(k);
            // e^{-iΘ} = w / |w|, so e^{±iΘ} is its conjugate for + and itself for -.
            let phase = if w.is_finite() && w.norm() > 0.0 {
                let u = w / w.norm();
                match h {
                    Helicity::Plus => u.conj(),
                    Helicity::Minus => u,
                }
            } else {
                Complex64::new(1.0, 0.0)
            };
            phase * amp(k)
        })
    };

    let shrink = directional_decay(&transform.lorentz_inverse).min(1.0);
    let length_scale = f.length_scale() * shrink;
    let displacement = transform.lorentz_inverse.transpose() * f.displacement();

    f.map_components(wrap)
        .with_axial_symmetry(false)
        .with_length_scale(length_scale)
        .with_displacement(displacement)
}

/// `min over unit k′ of |Λ⁻¹k′|`, the factor by which the decay of
/// `e^{-|k|l}` slows down in the new frame.
fn directional_decay(inverse: &Matrix4<f64>) -> f64 {
    // |k| = (Λ⁻¹)₀₀|k′| + (Λ⁻¹)₀ᵢ k′ⁱ on the light cone.
    let time_row = inverse.row(0);
    let spatial = Vector3::new(time_row[1], time_row[2], time_row[3]);
    time_row[0] - spatial.norm()
}
