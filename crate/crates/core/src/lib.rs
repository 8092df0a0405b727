//! SU(1,1)-covariant phase-space symbols on the Poincaré disc.

pub mod dynamics;
pub mod error;
pub mod fock;
pub mod geometry;
pub mod kernels;
pub mod quadrature;
pub mod specfun;
pub mod states;
pub mod verify;

pub use dynamics::{evolve_field, evolve_point, trajectory, HamiltonianSpec};
pub use error::{Error, Result};
pub use fock::{DensityMatrix, FockVector, LadderOps};
pub use geometry::{BlochVector, DiscPoint, GroupElement, HyperPoint, Scalar};
pub use kernels::KernelOrder;
pub use quadrature::QuadSpec;
pub use specfun::{IrrepIndex, SpectralPoint};
pub use states::{evaluate_field, symbol, Grid, Parity, PhaseSpaceField, StateSpec};
