//! Exposure diversity maximization under an item-aware independent cascade.
//!
//! Nodes and items carry leanings in `[-1, 1]`. Seeding `(node, item)` pairs
//! spreads items through a social graph; a node's diversity level is the
//! width of the leaning range it ends up exposed to. The crate evaluates the
//! expected total diversity of an assignment and maximizes it under budget
//! and per-node constraints.

pub mod baselines;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod io;
pub mod model;
pub mod optimizer;
pub mod rc;
mod rng;
pub mod synth;
pub mod world;

pub use error::{Error, Result};
pub use exec::Execution;
