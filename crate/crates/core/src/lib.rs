//! Numerical engine for the two-parameter family of solvable-group metrics
//! on R^3, `g = e^{-2 l1 z} dx^2 + e^{-2 l2 z} dy^2 + dz^2`: group and frame
//! structure, extrinsic curvature of surfaces, translating-soliton equations,
//! and mean curvature flow of the reduced (invariant-curve and graphical)
//! configurations.
//!
//! Modules follow the problem structure:
//! - [`solvgroup`]: the ambient space (product, frames, metric, connection,
//!   Killing fields, isometries);
//! - [`surfgeom`]: fundamental forms, shape operator, mean curvature;
//! - [`solitons`]: translator ODEs, conserved quantity, graph residuals;
//! - [`flow`]: explicit front-tracking and graphical mean curvature flow;
//! - [`verify`]: the cross-module property suites behind the CLI.

pub mod error;
pub mod flow;
pub mod interp;
pub mod ode;
pub mod rng;
pub mod solitons;
pub mod solvgroup;
pub mod surfgeom;
pub mod verify;

pub use error::{Error, Result};
pub use solvgroup::{Params, Point};
