//! Momentum-space photon wave functions.
//!
//! A photon state is a pair of amplitudes `f₊(k)`, `f₋(k)`, one per helicity.
//! Amplitudes are kept as evaluable maps rather than sampled arrays, so every
//! integral over them is an on-demand quadrature whose accuracy is controlled
//! by a [`QuadratureSpec`](crate::quadrature::QuadratureSpec).
//!
//! Units are natural (`ħ = c = ε₀ = μ₀ = 1`) unless a [`PhysicalConstants`]
//! value says otherwise. Lengths are measured in units of the state's length
//! scale `l`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{Vector3, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// One of the two photon helicities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub const BOTH: [Helicity; 2] = [Helicity::Plus, Helicity::Minus];

    /// `+1` for positive helicity, `-1` for negative.
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }
}

impl fmt::Display for Helicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Helicity::Plus => f.write_str("+"),
            Helicity::Minus => f.write_str("-"),
        }
    }
}

/// Constants entering the field normalization and the dispersion `ω = c|k|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar_c: f64,
    pub c: f64,
    pub epsilon0: f64,
    pub mu0: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar_c: 1.0,
            c: 1.0,
            epsilon0: 1.0,
            mu0: 1.0,
        }
    }
}

impl PhysicalConstants {
    pub fn new(hbar_c: f64, c: f64, epsilon0: f64, mu0: f64) -> Result<Self> {
        let consts = Self {
            hbar_c,
            c,
            epsilon0,
            mu0,
        };
        consts.validate()?;
        Ok(consts)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("hbar_c", self.hbar_c),
            ("c", self.c),
            ("epsilon0", self.epsilon0),
            ("mu0", self.mu0),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Angular frequency of a photon with wave vector `k`.
    pub fn omega(&self, k: &Vector3<f64>) -> f64 {
        self.c * k.norm()
    }
}

/// A single-helicity amplitude `k ↦ f(k)`.
pub type Amplitude = Arc<dyn Fn(Vector3<f64>) -> Complex64 + Send + Sync>;

/// Two-component photon wave function in momentum representation.
///
/// A missing component is identically zero; integrals skip it exactly.
///
/// `axial_symmetry` promises that each amplitude depends on `k` only through
/// `|k|` and `k_z` (no azimuthal phase at all). Integrators use it to collapse
/// the azimuthal integral.
///
/// The displacement `(c t₀, r₀)` accumulates the translations and time shifts
/// applied to the state. It carries no physics of its own: quadrature uses
/// the difference between two states' displacements to size its node counts
/// for the oscillating factor `e^{i(k·Δr₀ + ωΔt₀)}`.
#[derive(Clone)]
pub struct HelicityDoublet {
    plus: Option<Amplitude>,
    minus: Option<Amplitude>,
    axial_symmetry: bool,
    length_scale: f64,
    displacement: Vector4<f64>,
}

impl fmt::Debug for HelicityDoublet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HelicityDoublet")
            .field("plus", &self.plus.as_ref().map(|_| "<fn>"))
            .field("minus", &self.minus.as_ref().map(|_| "<fn>"))
            .field("axial_symmetry", &self.axial_symmetry)
            .field("length_scale", &self.length_scale)
            .field("displacement", &self.displacement)
            .finish()
    }
}

impl HelicityDoublet {
    /// Builds a doublet from optional amplitudes.
    ///
    /// `length_scale` is the decay length of `|f|²` in the sense of `e^{-k l}`;
    /// it tunes the radial quadrature and sets the unit of reported lengths.
    pub fn new(
        plus: Option<Amplitude>,
        minus: Option<Amplitude>,
        length_scale: f64,
    ) -> Result<Self> {
        if !(length_scale.is_finite() && length_scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "length scale must be finite and positive, got {length_scale}"
            )));
        }
        Ok(Self {
            plus,
            minus,
            axial_symmetry: false,
            length_scale,
            displacement: Vector4::zeros(),
        })
    }

    /// Convenience constructor from closures for both helicities.
    pub fn from_fns<P, M>(plus: P, minus: M, length_scale: f64) -> Result<Self>
    where
        P: Fn(Vector3<f64>) -> Complex64 + Send + Sync + 'static,
        M: Fn(Vector3<f64>) -> Complex64 + Send + Sync + 'static,
    {
        Self::new(Some(Arc::new(plus)), Some(Arc::new(minus)), length_scale)
    }

    pub fn with_axial_symmetry(mut self, axial: bool) -> Self {
        self.axial_symmetry = axial;
        self
    }

    pub fn axial_symmetry(&self) -> bool {
        self.axial_symmetry
    }

    pub fn length_scale(&self) -> f64 {
        self.length_scale
    }

    pub(crate) fn with_length_scale(mut self, l: f64) -> Self {
        self.length_scale = l;
        self
    }

    /// Accumulated `(c t₀, r₀)` displacement hint.
    pub fn displacement(&self) -> Vector4<f64> {
        self.displacement
    }

    pub(crate) fn with_displacement(mut self, d: Vector4<f64>) -> Self {
        self.displacement = d;
        self
    }

    pub fn component(&self, helicity: Helicity) -> Option<&Amplitude> {
        match helicity {
            Helicity::Plus => self.plus.as_ref(),
            Helicity::Minus => self.minus.as_ref(),
        }
    }

    pub fn is_zero(&self, helicity: Helicity) -> bool {
        self.component(helicity).is_none()
    }

    /// Evaluates `f_λ(k)`.
    pub fn eval(&self, helicity: Helicity, k: Vector3<f64>) -> Complex64 {
        self.component(helicity)
            .map_or(Complex64::new(0.0, 0.0), |f| f(k))
    }

    /// Largest phase rate `|Δr₀| + |c Δt₀|` between the two states' displacements.
    pub fn oscillation_extent(&self, other: &HelicityDoublet) -> f64 {
        let d = self.displacement - other.displacement;
        d[0].abs() + Vector3::new(d[1], d[2], d[3]).norm()
    }

    /// Rebuilds each present component through `wrap`, keeping metadata.
    pub(crate) fn map_components<W>(&self, wrap: W) -> Self
    where
        W: Fn(Helicity, Amplitude) -> Amplitude,
    {
        Self {
            plus: self.plus.clone().map(|f| wrap(Helicity::Plus, f)),
            minus: self.minus.clone().map(|f| wrap(Helicity::Minus, f)),
            ..self.clone()
        }
    }
}

/// The exponential family `f₊(k) = e^{-kl/2} / √(4πk/l)`, `f₋ = 0`.
///
/// Normalized under the `d³k/k` measure for every `l > 0`.
pub fn example_state(l: f64) -> Result<HelicityDoublet> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "length scale must be finite and positive, got {l}"
        )));
    }
    let plus: Amplitude = Arc::new(move |k: Vector3<f64>| {
        let kn = k.norm();
        Complex64::new((-0.5 * kn * l).exp() / (4.0 * PI * kn / l).sqrt(), 0.0)
    });
    Ok(HelicityDoublet::new(Some(plus), None, l)?.with_axial_symmetry(true))
}

/// Spatial translation by `r0`: both helicities pick up `e^{ik·r₀}`.
pub fn translate(f: &HelicityDoublet, r0: Vector3<f64>) -> HelicityDoublet {
    if r0 == Vector3::zeros() {
        return f.clone();
    }
    // Only a shift along z keeps the amplitude a function of (|k|, k_z).
    let axial = f.axial_symmetry && r0.x == 0.0 && r0.y == 0.0;
    let mut d = f.displacement;
    d[1] += r0.x;
    d[2] += r0.y;
    d[3] += r0.z;
    f.map_components(|_, amp| {
        Arc::new(move |k: Vector3<f64>| amp(k) * Complex64::cis(k.dot(&r0)))
    })
    .with_axial_symmetry(axial)
    .with_displacement(d)
}

/// Time translation by `t0`: both helicities pick up `e^{iωt₀}`, `ω = c|k|`.
pub fn time_shift(f: &HelicityDoublet, t0: f64, constants: &PhysicalConstants) -> HelicityDoublet {
    if t0 == 0.0 {
        return f.clone();
    }
    let c = constants.c;
    let mut d = f.displacement;
    d[0] += c * t0;
    f.map_components(|_, amp| {
        Arc::new(move |k: Vector3<f64>| amp(k) * Complex64::cis(c * k.norm() * t0))
    })
    .with_displacement(d)
}

/// Multiplies both helicity components by the constant phase `e^{iφ}`.
pub fn global_phase(f: &HelicityDoublet, phi: f64) -> HelicityDoublet {
    if phi == 0.0 {
        return f.clone();
    }
    let factor = Complex64::cis(phi);
    f.map_components(|_, amp| Arc::new(move |k: Vector3<f64>| amp(k) * factor))
}

/// Multiplies both helicity components by a real or complex constant.
pub fn scale(f: &HelicityDoublet, factor: Complex64) -> HelicityDoublet {
    f.map_components(|_, amp| Arc::new(move |k: Vector3<f64>| amp(k) * factor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn example_state_values() {
        let f = example_state(1.0).unwrap();
        let v = f.eval(Helicity::Plus, Vector3::new(0.0, 0.0, 1.0));
        assert_relative_eq!(v.re, (-0.5f64).exp() / (4.0 * PI).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(v.re, 0.17110, epsilon = 5e-6);
        assert_eq!(v.im, 0.0);
        assert!(f.is_zero(Helicity::Minus));
        assert!(f.axial_symmetry());

        let f2 = example_state(2.0).unwrap();
        let v = f2.eval(Helicity::Plus, Vector3::new(0.3, 0.0, 0.4));
        assert_relative_eq!(v.re, (-0.5f64).exp() / PI.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn example_state_rejects_bad_length() {
        for l in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(example_state(l), Err(Error::InvalidParameter(_))));
        }
    }

    #[test]
    fn zero_operations_are_identity() {
        let f = example_state(1.0).unwrap();
        let k = Vector3::new(0.3, -0.2, 0.9);
        let base = f.eval(Helicity::Plus, k);
        assert_eq!(translate(&f, Vector3::zeros()).eval(Helicity::Plus, k), base);
        assert_eq!(
            time_shift(&f, 0.0, &PhysicalConstants::default()).eval(Helicity::Plus, k),
            base
        );
        assert_eq!(global_phase(&f, 0.0).eval(Helicity::Plus, k), base);
    }

    #[test]
    fn translation_matches_shifted_family() {
        let (l, a) = (1.3, 0.7);
        let f = example_state(l).unwrap();
        let shifted = translate(&f, Vector3::new(0.0, 0.0, a));
        assert!(shifted.axial_symmetry());
        for k in [Vector3::new(0.2, 0.1, 0.5), Vector3::new(-1.0, 2.0, -0.3)] {
            let kn = k.norm();
            let expected = Complex64::cis(k.z * a) * (-kn * l / 2.0).exp()
                / (4.0 * PI * kn / l).sqrt();
            let got = shifted.eval(Helicity::Plus, k);
            assert_relative_eq!(got.re, expected.re, epsilon = 1e-15);
            assert_relative_eq!(got.im, expected.im, epsilon = 1e-15);
        }
        assert!(!translate(&f, Vector3::new(0.1, 0.0, 0.0)).axial_symmetry());
    }

    #[test]
    fn time_shift_is_unimodular() {
        let f = example_state(1.0).unwrap();
        let g = time_shift(&f, 2.5, &PhysicalConstants::default());
        let k = Vector3::new(0.4, 0.3, -0.1);
        assert_relative_eq!(
            g.eval(Helicity::Plus, k).norm(),
            f.eval(Helicity::Plus, k).norm(),
            max_relative = 1e-15
        );
        assert_relative_eq!(g.displacement()[0], 2.5);
    }

    #[test]
    fn oscillation_extent_tracks_relative_shift() {
        let f = example_state(1.0).unwrap();
        let a = translate(&f, Vector3::new(0.0, 0.0, 3.0));
        let b = translate(&f, Vector3::new(0.0, 4.0, 3.0));
        assert_relative_eq!(a.oscillation_extent(&f), 3.0);
        assert_relative_eq!(a.oscillation_extent(&b), 4.0);
        assert_relative_eq!(a.oscillation_extent(&a), 0.0);
    }

    #[test]
    fn constants_validation() {
        assert!(PhysicalConstants::new(1.0, 1.0, 1.0, 1.0).is_ok());
        assert!(PhysicalConstants::new(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(PhysicalConstants::new(-1.0, 1.0, 1.0, 1.0).is_err());
    }
}
