//! Independent numerical checks of the closed-form bounds: mutual
//! information of chosen inputs, a constrained Blahut–Arimoto capacity
//! estimate, and relative entropies against the bounds' output densities.

mod blahut;
mod continuous;
pub mod density;
mod information;
mod input;

pub use blahut::{capacity_oracle, OracleConfig, OracleResult};
pub use continuous::{continuous_input_mi, ContinuousInput};
pub use density::{duality_gap, output_density, MixtureDensity, OutputDensity, OutputDensitySpec};
pub use information::{
    binary_input_mi, divergences, mutual_information, mutual_information_via_entropy,
    on_off_keying, output_entropy,
};
pub use input::DiscreteInputDistribution;
