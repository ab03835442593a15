//! Closed-form model geometries.

pub mod action;
pub mod config;
pub mod curvature;
pub mod eguchi_hanson;
pub mod flat;
pub mod gibbons_hawking;
pub mod taub_nut;

pub use action::{apply_action, InvarianceReport, IsometryAction};
pub use config::{Family, Model, ModelConfig};
pub use curvature::riemann_norm;
pub use eguchi_hanson::{deficit_jet, eh_potential, eh_radial_jet, EguchiHanson, EguchiHansonDeficit};
pub use flat::FlatModel;
pub use gibbons_hawking::{gh_ale_potential, GhKind, GibbonsHawking, GibbonsHawkingData};
pub use taub_nut::{hopf_map, TaubNut, TaubNutFrame, TaubNutPotential};
