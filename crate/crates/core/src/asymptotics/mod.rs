//! Macroscopic limit objects and the aligned initial layer.

pub mod approximant;
pub mod chapman_enskog;
pub mod diffusion;
pub mod layer;
pub mod wave;

pub use approximant::{aligned_approximant, CompositeApproximant};
pub use chapman_enskog::{chapman_enskog_residual, collision_term, CeResidual};
pub use diffusion::{diffusion_coefficient, heat_solve, DiffusionRegime, DiffusionSpec, MacroSeries};
pub use layer::{
    decay_rate, initial_layer_at, initial_layer_solve, layer_certificate, layer_derivative_decay,
    layer_derivative_sup, separation_constant, DerivativeDecay, LayerCertificate, LayerProfile,
};
pub use wave::{traveling_wave, traveling_wave_fn};
