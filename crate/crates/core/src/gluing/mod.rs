//! Cut-offs, glued potentials and assembled approximate metrics.

pub mod assembly;
pub mod cutoff;
pub mod glue;
pub mod harmonic;
pub mod quartic;
pub mod refined;

pub use crate::fit::{fit_decay_rate, loglog_slope, DecayFit};
pub use assembly::{AlhAssembly, AssemblyConfig, AssemblySummary, Region, RegionStats, SupportCertificate};
pub use cutoff::{profile, CutoffSpec};
pub use glue::{glue_potential, GluedPotential};
pub use quartic::{extract_quartic_jet, recover_tn_potential, QuarticJet, TnPotentialField};
pub use harmonic::{solve_decaying_harmonic, AleBackground, HarmonicExtension, RadialProfile};
pub use refined::{local_model_deviation, refined_scaling, RefinedGluing, RefinedSample};
