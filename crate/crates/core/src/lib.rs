//! Numerical and exact-arithmetic toolkit for glued Ricci-flat Kähler metrics
//! on Kummer-type quotients of flat spaces.
//!
//! * [`kahler`]: forms, potentials, volume ratios, the Monge–Ampère operator.
//! * [`models`]: flat quotients, Eguchi–Hanson, Gibbons–Hawking and Taub-NUT.
//! * [`gluing`]: cut-offs, glued potentials and assembled approximate metrics.
//! * [`weighted`]: weight functions, weighted norms, Green operator checks.
//! * [`solver`]: the fixed-point Monge–Ampère solver on grids.
//! * [`topology`]: exact orbifold and characteristic-number bookkeeping.
//! * [`verify`]: named check suites shared by the command line and the tests.

pub mod error;
pub mod exec;
pub mod fit;
pub mod gluing;
pub mod grid;
pub mod jet;
pub mod kahler;
pub mod models;
pub mod solver;
pub mod topology;
pub mod verify;
pub mod weighted;

pub use error::{Error, Result};
pub use exec::Exec;
