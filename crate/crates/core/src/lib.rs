//! Three-robot formation control: R1 keeps distances to R2 and R3 and the
//! signed area of the triangle, R2 and R3 keep bearings towards R1.
//!
//! The crate integrates the closed loop, classifies where trajectories end
//! up (desired shape, rigidly translating "moving" shape, collision), and
//! provides the algebra used to rule out undesired rest and moving
//! configurations for isosceles targets.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod config;
pub mod control;
pub mod error;
pub mod geometry;
pub mod simulate;
pub mod sweep;

pub use control::Gains;
pub use error::{Error, Result};
pub use geometry::{FormationSpec, TeamConfiguration, Vec2};
pub use simulate::{simulate, OutcomeKind, SimParams};
