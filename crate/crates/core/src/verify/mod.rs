//! Residuals of the separation equations, an RK4 integrator for rebuilding
//! generating curves, and constancy sweeps of K and H.

mod ode;
mod residuals;
mod sweep;

pub use ode::{integrate_rk4, reconstruct, separation_ode, OdeProblem, Reconstruction, Trajectory};
pub use residuals::{residual, residual_catalog, residual_spec, residual_sweep, CurveJets, ResidualReport, ResidualSpec};
pub use sweep::{constancy_sweep, Quantity, SweepConfig, SweepReport, DEFAULT_NODES, DEFAULT_RANDOM, DEFAULT_SEED};
