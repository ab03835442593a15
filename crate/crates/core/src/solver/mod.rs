//! Fixed-point Monge–Ampère solver on cell-centred grids.

pub mod config;
pub mod discrete;
pub mod fixed_point;
pub mod linear;
pub mod ma;
pub mod manufactured;
pub mod pipeline;
pub mod symmetry;

pub use discrete::{real_coefficients, EndCondition, Ends, SparseMatrix, Stencil};
pub use fixed_point::{
    banach_fixed_point, check_smallness, FixedPointConfig, FixedPointProblem, FixedPointReport, ScalarModel,
    SmallnessCheck, SMALLNESS_DIAGNOSIS,
};
pub use linear::{bicgstab, KrylovOptions, KrylovStats};
pub use ma::{estimate_constants, fibre_means, linear_solve, Accelerator, ConstantEstimate, LinearSolution, MaProblem};
pub use pipeline::{alh_domain, alh_problem, end_fit, solve_ma, torus_problem, EndFit, SolveOptions, SolveOutcome, SolveReport, PM_REDUCED};
pub use manufactured::{manufactured_recovery, manufactured_solve, Manufactured, RecoveryReport, RecoveryRow};
pub use symmetry::{invariance_defect, X1Isometry};
pub use config::{SolverConfig, SolverRun, MANUFACTURED_T4};
