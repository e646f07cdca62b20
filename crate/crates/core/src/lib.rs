//! Reaction-diffusion with a discontinuous diffusivity in one space dimension.
//!
//! Solves `u_t = (D_ε u_x)_x + f(u)` on `(0, L)` with zero-flux ends, where
//! `D_ε = 1` on an inner interval and `ε` outside, together with its smoothed
//! variant and the two `ε → 0` limit problems, and provides the diagnostics
//! used to check the singular-limit behaviour numerically.

pub mod analysis;
pub mod coefficients;
pub mod grid;
pub mod harness;
pub mod limits;
pub mod solver;

pub use coefficients::{BistableReaction, DiffusivityProfile, FaceAveraging};
pub use grid::{build_grid, Grid1D, InterfaceSide, Region};
pub use solver::{solve, Field, InitialDatum, TimeStepConfig, Trajectory};
