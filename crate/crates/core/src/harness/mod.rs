//! Measurable experiments built from the solvers and limit objects.

pub mod conditions;
pub mod fit;
pub mod micro;
pub mod norms;
pub mod sandwich;
pub mod selftest;
pub mod sweep;

pub use conditions::{check_conditions, ConditionReport};
pub use fit::{fit_order, least_squares, LineFit};
pub use micro::{micro_refinement, restrict, MicroStudy};
pub use norms::{difference_norm, sup_error, sup_error_states};
pub use sandwich::{sandwich_check, SandwichReport};
pub use selftest::{run_selftest, Check};
pub use sweep::{epsilon_sweep, ErrorSeries, Experiment, SweepOptions, SweepPoint};
