//! Random distance graphs on the two-dimensional discrete torus.
//!
//! Vertices of `{1, ..., N}^2` carry i.i.d. weights `W_v`, and each pair is
//! joined independently with probability `min{c W_u W_v / (N d(u, v)), 1}`
//! where `d` is the folded L1 torus distance. The crate provides:
//!
//! * [`geometry`]: torus distances, ring sizes and the rescaled kernel;
//! * [`model`]: weight laws and a near-linear exact edge sampler;
//! * [`components`]: union-find measurement and the exploration process;
//! * [`theory`]: the limit constants for the largest component;
//! * [`branching`]: Galton-Watson oracles and simulators;
//! * [`harness`]: experiment sweeps, theory reports and coupling checks.

pub mod branching;
pub mod components;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod model;
pub mod rng;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
