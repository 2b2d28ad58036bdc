//! 1D Dirac scattering across a mass / Fermi-velocity jump with a scalar
//! point interaction at the origin, plus Shannon entropies of the scattering
//! state in position and momentum space and the associated uncertainty bound.
//!
//! Everything is dimensionless with `hbar = 1`. The pipeline is
//! `medium` -> `scattering` -> `position_entropy` / `momentum_entropy` ->
//! `bounds`, with `quadrature` as the shared integration engine.

pub mod bounds;
pub mod error;
pub mod medium;
pub mod momentum_entropy;
pub mod position_entropy;
pub mod quadrature;
pub mod scattering;

pub use bounds::{build_report, EntropyReport};
pub use error::Error;
pub use medium::{MediumParams, Regime};
pub use position_entropy::WindowSpec;
pub use quadrature::QuadSpec;
pub use scattering::ScatteringSolution;

pub type Result<T> = std::result::Result<T, Error>;
