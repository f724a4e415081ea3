//! Behavioral model and design-space explorer for ferroelectric-FET ternary
//! content-addressable memories: device I-V, cell match semantics, array
//! search with two-step early termination, and latency/energy/area figures.

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod array;
pub mod calibrate;
pub mod cell;
pub mod commands;
pub mod config;
pub mod device;
pub mod error;
pub mod grid;
pub mod perf;
pub mod report;

pub use array::{program, search, ArrayConfig, ArrayState, EarlyTermination, SearchOutcome};
pub use cell::{CellDesign, SearchBit, TernaryBit};
pub use config::RunConfig;
pub use device::{FeFetParams, PolarizationState};
pub use error::{Result, TcamError};
