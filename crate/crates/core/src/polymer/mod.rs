//! Subset polymer models and their perfect sampler.
//!
//! A polymer is a colored connected vertex set of the host graph; two
//! polymers are compatible when they are disjoint and non-adjacent. The Gibbs
//! measure weights every set of pairwise compatible polymers by the product
//! of their weights. Sampling runs coupling from the past on the polymer
//! dynamics (delete at a uniform vertex with probability 1/41, otherwise
//! propose a polymer from `nu_v`), made feasible by a bounding chain.

mod bounding;
mod cftp;
mod conditions;
mod dynamics;
mod model;
mod nu;

pub use bounding::{BoundingState, StepKind};
pub use cftp::{cftp_sample, Cftp, CftpOutcome};
pub use conditions::{check_conditions, ConditionMode, ConditionReport};
pub use dynamics::{polymer_dynamics_step, Branch, Move, MoveSampler};
pub use model::{Polymer, PolymerConfig, PolymerModel, NU_SCALE};
pub use nu::NuSampler;
