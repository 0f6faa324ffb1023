//! Photon wave functions in momentum and position representation, the
//! momentum, position and coherent-state fidelities between them, Wigner
//! phases of rotations and boosts, and a localization-extension solver.
//!
//! ```
//! use photon_fidelity::{example_state, fidelity_m, translate, QuadratureSpec};
//! use nalgebra::Vector3;
//!
//! let f1 = example_state(1.0).unwrap();
//! let f2 = translate(&f1, Vector3::new(0.0, 0.0, 1.0));
//! let report = fidelity_m(&f1, &f2, &QuadratureSpec::default()).unwrap();
//! let expected = std::f64::consts::FRAC_PI_4.powi(2);
//! assert!((report.value - expected).abs() < 1e-7);
//! ```

// `!(a < b)` comparisons are deliberate: NaN must be rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod format;
pub mod localization;
pub mod momentum;
pub mod poincare;
pub mod position;
pub mod quadrature;
pub mod wavefunctions;

pub use error::{Error, Result};
pub use nalgebra::Vector3;
pub use num_complex::Complex64;
pub use quadrature::{integrate_spherical, Integral, PolarVariable, QuadratureSpec, Symmetry};
pub use wavefunctions::{
    example_state, global_phase, scale, time_shift, translate, Amplitude, Helicity,
    HelicityDoublet, PhysicalConstants,
};
pub use momentum::{
    coherent_fidelity, coherent_fidelity_general, fidelity_c, fidelity_m, inner_product_m, norm_m,
    phase_diff, CoherentStateSpec, FidelityReport, Measure,
};
pub use position::{
    fidelity_p, fidelity_p_grid, nonlocal_inner_product, parseval_inner_product, photon_number,
    polarization_vector, rs_field, synthesize_position, synthesize_state, whittaker_field,
    maxwell_residual, PositionField, PositionState, SpatialGrid,
};
pub use poincare::{
    apply_transform, theta_boost_y, theta_closed_form, theta_general, theta_rotation_y,
    PoincareTransform, TransformKind,
};
pub use localization::{
    compute_curve, emit_curve, extension, fidelity_of_phase, fidelity_of_shift, write_curve,
    Abscissa, CurveRequest, ExtensionQuery,
};
