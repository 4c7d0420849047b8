//! Kelvin fundamental solution of linear elastostatics.
//!
//! An infinite isotropic elastic medium loaded by a concentrated force
//! admits a closed-form equilibrium state (stress, strain, displacement)
//! singular at the load point. This crate provides:
//!
//! * [`fields`] -- closed-form evaluation of that state, together with the
//!   classical displacement formula and the Helmholtz potential pair that
//!   serve as independent oracles;
//! * [`derivation`] -- a numerical re-derivation that goes stress-first:
//!   harmonic-ansatz search, angular ODE solves with regularity filtering,
//!   constant determination from load balance and axis symmetry, a
//!   sequential solve for the transverse normal stresses, and recovery of
//!   the shear component by a path integral;
//! * [`verify`] -- residual operators and integral identities (balance,
//!   compatibility, sphere traction, the two-sided trace identity,
//!   strain-displacement consistency, the displacement-form equilibrium
//!   equations) that certify any candidate state by finite differences and
//!   quadrature;
//! * [`nuclei`] -- strain nuclei (force doublets, center of dilatation)
//!   built by superposition of the point-force kernel;
//! * [`geometry`] and [`material`] -- the coordinate frames and the
//!   isotropic constitutive maps everything else is written against.
//!
//! All operations are pure functions of their inputs; values are immutable
//! and freely shareable across threads.

pub mod derivation;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod material;
pub mod nuclei;
pub mod numerics;
pub mod verify;

pub use error::{KelvinError, Result};
pub use fields::{
    CylindricalStress, Displacement, HelmholtzPotentials, PointLoad, StrainComponents, StressSigns,
};
pub use geometry::{CartesianPoint, CylindricalTriple, FrameBasis, SphericalTriple};
pub use material::IsotropicElastic;
