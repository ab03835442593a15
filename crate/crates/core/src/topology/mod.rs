//! Exact orbifold bookkeeping: quotient actions, fixed points, singularity
//! inventories, resolution records and the `χ`/`τ`/`η_ad` arithmetic.

pub mod action;
pub mod catalogue;
pub mod exact;
pub mod flat3;
pub mod invariants;

pub use action::{AffineMap, Isotropy, OrbifoldAction, SingularPointRecord};
pub use catalogue::{
    catalogue_action, curves_per_point, divisor_class_ledger, inventory_of, quotient_singularity_inventory, sigma, tau, DivisorLedger,
    Inventory, CATALOGUE,
};
pub use exact::Exact;
pub use flat3::{flat3_catalogue, holonomy_class, Flat3Entry, GeometryClass};
pub use invariants::{euler_eta_table, identities_hold, mass_sign, orientation_fillability, AlfFamily, Fillability, MassSign, TopologyReport};
