//! Particle in the unit box under every self-adjoint boundary condition:
//! spectra, eigenfunctions, Wigner functions and their high-energy limits.

pub mod bc;
pub mod classical;
pub mod eigen;
pub mod error;
mod mat2;
pub mod quad;
pub mod spectrum;
pub mod wigner;

pub use bc::{BcClass, BoundaryCondition, BoundaryValues, HermitianBoundaryMatrix, UnitaryMatrix2};
pub use classical::{ClassicalDistribution, OccupancyHistogram, RingDoorParams};
pub use eigen::{EigenState, Eigenfunction};
pub use error::{Error, Result};
pub use spectrum::{AsymptoticPrediction, Parity, SpectralPoint};
pub use wigner::{ClassicalLimit, ClassicalLimitConfig, OmegaSequence, WignerGrid};
