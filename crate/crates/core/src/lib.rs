//! Contagion bounds, influence maximization, and adversarial online
//! influence-maximization bandits on weighted graphs.

pub mod bandit;
pub mod bounds;
pub mod graph;
pub mod maximize;
pub mod simulate;
mod util;

pub use bounds::{bound_report, BoundReport, BoundsError};
pub use maximize::{
    exhaustive_maximize, greedy_maximize, lazy_greedy_maximize, GreedyTrace, MaximizeError,
    Objective,
};

pub use graph::{
    infected_fraction, reach, EdgeSet, GraphError, ModelKind, SeedSet, TriggerModel,
    WeightedDigraph,
};
pub use simulate::{
    estimate_influence, exact_influence, sample_live_edges, InfluenceEstimate, LiveEdgeSample,
    SimulateError,
};
