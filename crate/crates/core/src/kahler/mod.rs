//! Kähler forms, potentials and the Monge–Ampère operator in a fixed chart.

mod forms;
mod monge_ampere;
mod potential;

pub use forms::{Chart, ComplexPoint, HermitianForm, HoloTwoForm};
pub use monge_ampere::{
    laplacian, laplacian_of, ma_density_ratio, ma_density_ratio_at, ma_residual, ma_residual_of,
    quadratic_remainder, quadratic_remainder_of, ricci_potential_at, FormField, PotentialForm,
};
pub use potential::{
    complex_from_real_hessian, complex_hessian, complex_hessian_fd, real_hessian_fd, FlatPotential,
    FnPotential, Potential, PotentialJet, WithoutJet,
};
