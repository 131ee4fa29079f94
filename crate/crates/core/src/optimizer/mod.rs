//! Assignment optimizers: greedy engines, sample-size bounds and the
//! sampling-based driver.

mod bounds;
mod greedy;
mod sampling;

pub use bounds::{lambda_bound, log_binom, theta_i};
pub use greedy::{exact_greedy, rc_greedy, GreedyEngine, GreedyTrace};
pub use sampling::{sampling_phase, tdem, SamplingOutcome, TdemParams};
