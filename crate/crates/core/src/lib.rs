//! Kinodynamic motion planning in state-cost space.
//!
//! Any optimal planning problem (incremental plus terminal cost, arbitrary
//! dynamics and constraints) can be rewritten as a *feasible* planning
//! problem by augmenting states with a cost-to-come coordinate. This crate
//! implements that lift, wraps sampling-based feasible planners (RRT and
//! EST) into anytime meta-planners whose solution costs converge toward the
//! optimum, and ships six benchmark problems with a deterministic harness
//! that records cost-versus-time curves.
//!
//! Layering, bottom up:
//!
//! - [`space`]: vectors, bounds, metrics, sampling, unit scaling.
//! - [`system`]: the control-system interface, propagation, trajectory cost.
//! - [`statecost`]: the lift, cost-bounded goal sets, pruning predicates.
//! - [`nn`]: KD-tree nearest neighbor and multi-grid density estimation.
//! - [`planners`]: kinodynamic RRT and EST over lifted systems.
//! - [`meta`]: bounded-suboptimal and anytime asymptotically-optimal
//!   meta-planners, restart baselines, diagnostics.
//! - [`oracle`]: grid-Dijkstra reference optima for the planar benchmarks.
//! - [`problems`]: benchmark problem factories and obstacle fixtures.
//! - [`harness`]: seeded trials, aggregation, CSV/JSON emission.

pub mod error;
pub mod harness;
pub mod meta;
pub mod nn;
pub mod oracle;
pub mod planners;
pub mod problems;
pub mod space;
pub mod statecost;
pub mod system;

pub use error::{Error, Result};
pub use space::{BoxBounds, ControlVector, Metric, StateVector};
pub use statecost::{AugmentedState, CostBoundedGoal, LiftedSystem};
pub use system::{ControlSystem, IntegrationMode, Trajectory};
