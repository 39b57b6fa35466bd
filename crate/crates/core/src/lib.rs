//! Balancing of a multi-parallel mixed-model disassembly line: three lines
//! share two rows of workstations, and a schedule must pick a station for
//! every task of every line while respecting precedence within each line,
//! the takt, and each row's line compatibility.
//!
//! The crate provides the problem model ([`model`]), a sequence codec that
//! turns task orders into station schedules ([`codec`]), the three-objective
//! evaluator ([`eval`]), an improved reference-point evolutionary solver
//! ([`evolve`]), comparison baselines ([`baselines`]), demand-driven
//! reconfiguration rules ([`dynamics`]), and front analytics ([`analytics`]).

pub mod analytics;
pub mod baselines;
pub mod codec;
pub mod dynamics;
pub mod eval;
pub mod evolve;
pub mod fixtures;
pub mod generate;
pub mod io;
pub mod model;
pub mod niching;
pub mod rank;
pub mod refpoints;

pub use model::{Instance, ModelError};
