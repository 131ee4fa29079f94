//! Graphs, items, leanings, assignments and propagation probabilities.

mod assignment;
mod graph;
mod leaning;
mod propagation;

pub use assignment::{
    assignment_stats, check_feasible, Assignment, AssignmentStats, ConstraintSet, Feasibility,
    Pair, Violation,
};
pub use graph::{EdgeId, ItemCatalog, ItemId, NodeId, SocialGraph};
pub use leaning::{diversity_level, span_gain, validate_leaning, LeaningSpan, LEANING_SLACK};
pub use propagation::{EdgeContext, Instance, PropagationModel};
