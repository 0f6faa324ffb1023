//! Position-space photon wave functions and the quantities built from them.

pub mod fields;
pub mod grid;
pub mod inner;
pub mod nonlocal;
pub mod polarization;
pub mod synthesis;

pub use fields::{
    maxwell_residual, whittaker_field, whittaker_time_derivative, MaxwellResidual, PlaneWave,
    SampledWave, ScalarDerivatives, ScalarWave,
};
pub use grid::{FieldKind, PositionField, PositionState, SpatialGrid};
pub use inner::{fidelity_p, fidelity_p_grid, inner_product_p, parseval_inner_product};
pub use nonlocal::{nonlocal_inner_product, photon_number, MAX_NONLOCAL_POINTS};
pub use polarization::polarization_vector;
pub use synthesis::{
    coherent_mean_field, rs_field, rs_time_derivative, synthesize_position, synthesize_state,
    synthesize_time_derivative,
};
