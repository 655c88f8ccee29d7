//! Curvature of graph hypersurfaces and submanifolds in isotropic space.
//!
//! Points of isotropic `n`-space are written `(x_1, ..., x_n)`; the metric
//! only sees the first `n - 1` coordinates and `x_n` is the isotropic
//! direction.

pub mod curveexpr;
mod error;
pub mod families;
pub mod geometry;
pub mod jets;
pub mod verify;

pub use error::{Error, Result};
