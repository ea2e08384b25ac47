//! Core of a deterministic, replayable simulator for autonomous mobile robots
//! with lights under Look-Compute-Move scheduling.
//!
//! The crate is `no_std`-compatible (with `alloc`); enable the `libm` feature
//! instead of `std` for float math on bare-metal targets. Everything in here is
//! pure computation over immutable inputs: planar geometry, the robot/light
//! model, activation and movement adversaries, the two-color gathering
//! program, the round engine with its runtime monitors, and an adversarial
//! schedule search that certifies non-gathering loops for two-robot rule
//! tables. File formats, the CLI, and plotting live in the companion
//! `lumigather` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("lumigather-core needs either the `std` or the `libm` feature for float math");

pub mod adversary;
pub mod algorithms;
pub mod engine;
pub mod geometry;
mod math;
pub mod model;
pub mod rng;
pub mod scheduling;

pub use engine::{run, RunConfig, Trace};
pub use geometry::{Circle, Point, Segment, Tolerance};
pub use model::{Color, Configuration, Frame, Params, RobotState, Snapshot};
pub use rng::SimRng;
