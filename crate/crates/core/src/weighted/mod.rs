//! Weighted function spaces: the weight `r_ε`, weighted norms, fibre means,
//! critical weights, the explicit Green operator and the Moser inequality.

pub mod critical;
pub mod green;
pub mod moser;
pub mod norm;
pub mod projection;
pub mod weight;

pub use critical::{critical_exponents, CriticalSet};
pub use green::{green_m1, green_m1_at, verify_weighted_green_bound, GreenBoundReport, GreenBoundRow, GreenSource, RadialSamples};
pub use moser::{moser_ratio, MoserGrid, MoserReport};
pub use norm::{weighted_holder_norm, weighted_holder_norm_at, weighted_norm, weighted_norm_at, weighted_sup, NormReport};
pub use projection::{torus_projection, DecomposedField};
pub use weight::{EndSummand, Pipeline, WeightFunction, WeightSpec, NECK_ZONE};
