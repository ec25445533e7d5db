//! Measurement and environment-induced decoherence models for two-level
//! systems, each paired with an exact state-vector reference.
//!
//! * [`qcore`]: registers, states, density matrices, exact evolution.
//! * [`bitmodel`]: a spin recorded by a single apparatus atom.
//! * [`envselect`]: the apparatus atom monitored by an environment of atoms,
//!   the correlation-damping factor and its statistics.
//! * [`infotheory`]: total, per-subsystem and correlation information.
//! * [`redundancy`]: records copied into many atoms, majority and parity reads.

// `!(x > 0.0)` style guards deliberately reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bitmodel;
pub mod envselect;
pub mod error;
pub mod infotheory;
pub mod numerics;
pub mod qcore;
pub mod redundancy;
pub mod seed;
pub mod selfcheck;
pub mod states;

pub use error::{Error, Result};
