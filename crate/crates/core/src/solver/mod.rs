//! Time integrators for the kinetic model and its discrete and homogeneous variants.

pub mod homogeneous;
pub mod kinetic;
pub mod micro;
pub mod monotone;
pub mod transport;

pub use homogeneous::{solve_homogeneous, HomogeneousState, HomogeneousTrajectory};
pub use kinetic::{kinetic_step, relax_cell, solve_kinetic, solve_kinetic_at, SolverOptions, Trajectory};
pub use micro::{micro_run, micro_step, switching_probabilities};
pub use monotone::{monotone_solve, MonotoneBracket};
pub use transport::sharp_transform;
