//! Two-orientation kinetic alignment model on the unit torus.
//!
//! The crate provides the collision operator and its equilibria, splitting
//! and microscopic solvers, the diffusive and aligned macroscopic limits with
//! the aligned initial layer, and a harness that measures how the kinetic
//! solution approaches those limits as the Knudsen number shrinks.

pub mod asymptotics;
pub mod error;
pub mod harness;
pub mod io;
pub mod model;
pub mod ode;
pub mod solver;

pub use error::{Error, Result};
pub use model::{
    collision_q, collision_r, linearize_apply, mass, maxwellian, project, ComponentPair, EquilibriumKind, Grid,
    KineticState, MacroField, ModelParams, Orientation, Scaling, Subspace, DEFAULT_CHI_FLOOR,
};
