//! Meta-planners: turning feasible planners into bounded-suboptimal and
//! asymptotically-optimal optimizers, plus the restart baselines and
//! convergence diagnostics.
//!
//! The anytime planner first solves the unbounded lifted problem, then
//! repeatedly re-plans with the cost bound set to the best cost found so
//! far. Trees are kept from iteration to iteration and pruned against each
//! new bound; proximity indices are rebuilt (and the EST cost axis rescaled)
//! at iteration boundaries.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::planners::{
    Budget, PlanOutcome, PlannerConfig, PlannerKind, SearchMonitor, TreePlanner,
};
use crate::statecost::{lift, CostBoundedGoal};
use crate::system::{ControlSystem, Trajectory};

/// One entry of the cost sequence: the i-th solution and when it arrived.
#[derive(Clone, Debug)]
pub struct CostEvent {
    pub meta_iteration: usize,
    pub cost: f64,
    pub wall_seconds: f64,
    pub planner_iterations: u64,
    pub tree_size: usize,
}

/// How a meta-run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// The global budget expired with at least one solution in hand.
    Budget,
    /// The budget expired before any solution was found.
    NoSolutionFound,
    /// The first (unbounded) call proved the problem has no solution.
    Infeasible,
    /// A complete planner proved no further improvement exists.
    Converged,
}

/// Output of a meta-planning run.
#[derive(Clone, Debug)]
pub struct MetaResult<T = Trajectory> {
    pub best: Option<T>,
    /// Strictly decreasing solution costs, in discovery order.
    pub events: Vec<CostEvent>,
    /// Total inner-planner iterations (extension attempts or inner calls).
    pub iterations: u64,
    pub termination: Termination,
}

impl<T> MetaResult<T> {
    pub fn final_cost(&self) -> Option<f64> {
        self.events.last().map(|e| e.cost)
    }

    pub fn first_cost(&self) -> Option<f64> {
        self.events.first().map(|e| e.cost)
    }
}

/// Monitor extension that also observes solution events.
pub trait MetaMonitor: SearchMonitor {
    fn on_solution(&mut self, _event: &CostEvent) {}
}

impl MetaMonitor for crate::planners::NullMonitor {}

/// Asymptotically-optimal anytime planning: solve the lifted problem
/// unbounded, then repeatedly with the bound set to the incumbent cost,
/// keeping and pruning the tree between iterations, until the budget runs
/// out.
pub fn ao_plan<S, R, M>(
    base: &S,
    kind: PlannerKind,
    cfg: &PlannerConfig,
    budget: Budget,
    rng: &mut R,
    monitor: &mut M,
) -> Result<MetaResult>
where
    S: ControlSystem + ?Sized,
    R: Rng,
    M: MetaMonitor + ?Sized,
{
    let lifted = lift(base);
    let mut planner = TreePlanner::new(&lifted, kind, cfg.clone())?;
    let started = Instant::now();
    let mut events: Vec<CostEvent> = Vec::new();
    let mut best = None;
    let mut cbar = f64::INFINITY;

    loop {
        let remaining = budget.max_iterations.map(|m| m.saturating_sub(planner.iterations()));
        if remaining == Some(0) {
            break;
        }
        let call_budget = Budget { deadline: budget.deadline, max_iterations: remaining };
        let goal = CostBoundedGoal::new(cbar)?;
        match planner.plan_feasible(&goal, &call_budget, rng, monitor)? {
            PlanOutcome::Found(node) => {
                let cost = lifted.lifted_terminal_cost(&planner.tree().node(node).z);
                debug_assert!(
                    cost < cbar - 1e-12 || cbar.is_infinite(),
                    "solution cost {cost} did not improve on bound {cbar}"
                );
                let event = CostEvent {
                    meta_iteration: events.len(),
                    cost,
                    wall_seconds: started.elapsed().as_secs_f64(),
                    planner_iterations: planner.iterations(),
                    tree_size: planner.tree().alive_count(),
                };
                monitor.on_solution(&event);
                events.push(event);
                best = Some(planner.extract_trajectory(node));
                cbar = cost;
                planner.prune_and_rebuild(cbar, cbar)?;
            }
            PlanOutcome::Exhausted => break,
        }
    }

    let termination =
        if events.is_empty() { Termination::NoSolutionFound } else { Termination::Budget };
    Ok(MetaResult { best, events, iterations: planner.iterations(), termination })
}

/// Restart baseline: run the feasible planner on fresh trees and keep the
/// lowest-cost path found. With `prune` set, tree growth is additionally
/// pruned against the incumbent cost (and the goal bounded by it).
pub fn m_x_plan<S, R, M>(
    base: &S,
    kind: PlannerKind,
    cfg: &PlannerConfig,
    budget: Budget,
    prune: bool,
    rng: &mut R,
    monitor: &mut M,
) -> Result<MetaResult>
where
    S: ControlSystem + ?Sized,
    R: Rng,
    M: MetaMonitor + ?Sized,
{
    let lifted = lift(base);
    let started = Instant::now();
    let mut events: Vec<CostEvent> = Vec::new();
    let mut best = None;
    let mut incumbent = f64::INFINITY;
    let mut total_iterations = 0u64;

    for call_index in 0.. {
        if budget.exhausted(total_iterations) {
            break;
        }
        let mut planner = TreePlanner::new(&lifted, kind, cfg.clone())?;
        if incumbent.is_finite() {
            // Rescale the EST cost axis by the best cost known so far (and
            // drop nothing: the fresh tree only contains the root).
            planner.prune_and_rebuild(f64::INFINITY, incumbent)?;
        }
        let goal = if prune && incumbent.is_finite() {
            CostBoundedGoal::new(incumbent)?
        } else {
            CostBoundedGoal::unbounded()
        };
        let remaining = budget.max_iterations.map(|m| m.saturating_sub(total_iterations));
        let call_iterations = match (cfg.per_call_iteration_cap, remaining) {
            (Some(cap), Some(rem)) => Some(cap.min(rem)),
            (Some(cap), None) => Some(cap),
            (None, rem) => rem,
        };
        let call_budget = Budget { deadline: budget.deadline, max_iterations: call_iterations };
        let outcome = planner.plan_feasible(&goal, &call_budget, rng, monitor)?;
        total_iterations += planner.iterations();
        if let PlanOutcome::Found(node) = outcome {
            let cost = lifted.lifted_terminal_cost(&planner.tree().node(node).z);
            if cost < incumbent - 1e-12 {
                incumbent = cost;
                let event = CostEvent {
                    meta_iteration: call_index,
                    cost,
                    wall_seconds: started.elapsed().as_secs_f64(),
                    planner_iterations: total_iterations,
                    tree_size: planner.tree().alive_count(),
                };
                monitor.on_solution(&event);
                events.push(event);
                best = Some(planner.extract_trajectory(node));
            }
        }
    }

    let termination =
        if events.is_empty() { Termination::NoSolutionFound } else { Termination::Budget };
    Ok(MetaResult { best, events, iterations: total_iterations, termination })
}

/// Outcome of one call to a complete feasible planner.
pub enum CompleteOutcome<T> {
    Solution { payload: T, cost: f64 },
    NoSolution,
}

/// Bounded-suboptimal meta-planning around a *complete* feasible planner:
/// solve unbounded, then repeatedly with the bound lowered to the incumbent
/// cost minus `epsilon`, until the planner proves no better solution
/// exists. The final cost is then within `epsilon` of optimal, and the
/// number of improving iterations is at most ⌈(c₀ − C*)/ε⌉.
pub fn bounded_suboptimal<T, A>(
    epsilon: f64,
    mut planner: A,
    max_meta_iterations: usize,
) -> Result<MetaResult<T>>
where
    A: FnMut(f64) -> CompleteOutcome<T>,
{
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    let started = Instant::now();
    let mut events = Vec::new();
    let mut calls = 1u64;

    let (mut best, mut incumbent) = match planner(f64::INFINITY) {
        CompleteOutcome::NoSolution => {
            return Ok(MetaResult {
                best: None,
                events,
                iterations: calls,
                termination: Termination::Infeasible,
            });
        }
        CompleteOutcome::Solution { payload, cost } => {
            events.push(CostEvent {
                meta_iteration: 0,
                cost,
                wall_seconds: started.elapsed().as_secs_f64(),
                planner_iterations: calls,
                tree_size: 0,
            });
            (payload, cost)
        }
    };

    for i in 1..=max_meta_iterations {
        calls += 1;
        match planner(incumbent - epsilon) {
            CompleteOutcome::NoSolution => {
                return Ok(MetaResult {
                    best: Some(best),
                    events,
                    iterations: calls,
                    termination: Termination::Converged,
                });
            }
            CompleteOutcome::Solution { payload, cost } => {
                debug_assert!(cost <= incumbent - epsilon + 1e-9);
                events.push(CostEvent {
                    meta_iteration: i,
                    cost,
                    wall_seconds: started.elapsed().as_secs_f64(),
                    planner_iterations: calls,
                    tree_size: 0,
                });
                best = payload;
                incumbent = cost;
            }
        }
    }
    Ok(MetaResult { best: Some(best), events, iterations: calls, termination: Termination::Budget })
}

/// Estimate of the expected next-solution cost under a fixed bound, and the
/// implied shrinkage factor ŵ = 1 − (mean − C*)/(c̄ − C*).
#[derive(Clone, Debug)]
pub struct ShrinkageEstimate {
    pub cbar: f64,
    pub c_star: f64,
    pub costs: Vec<f64>,
    pub failures: usize,
    pub mean_cost: Option<f64>,
    pub w_hat: Option<f64>,
}

impl ShrinkageEstimate {
    /// Lower edge of the normal-approximation confidence interval on ŵ at
    /// `z` standard errors (1.96 for 95%).
    pub fn w_hat_lower(&self, z: f64) -> Option<f64> {
        let mean = self.mean_cost?;
        if !self.cbar.is_finite() || self.costs.len() < 2 {
            return None;
        }
        let n = self.costs.len() as f64;
        let var = self.costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let upper_mean = mean + z * (var / n).sqrt();
        Some(1.0 - (upper_mean - self.c_star) / (self.cbar - self.c_star))
    }
}

/// Runs `n_trials` independent fresh-tree feasible calls under the bound
/// `cbar` and reports the empirical next-solution cost distribution. Trials
/// that exhaust their budget are excluded and counted. Trial `t` is seeded
/// with `base_seed + t`.
#[allow(clippy::too_many_arguments)]
pub fn shrinkage_diagnostic<S>(
    base: &S,
    kind: PlannerKind,
    cfg: &PlannerConfig,
    cbar: f64,
    c_star: f64,
    n_trials: usize,
    base_seed: u64,
    trial_time: Option<Duration>,
    trial_iterations: Option<u64>,
) -> Result<ShrinkageEstimate>
where
    S: ControlSystem + ?Sized,
{
    let lifted = lift(base);
    let mut costs = Vec::new();
    let mut failures = 0;
    for t in 0..n_trials {
        let mut rng = ChaCha8Rng::seed_from_u64(base_seed + t as u64);
        let mut planner = TreePlanner::new(&lifted, kind, cfg.clone())?;
        if cbar.is_finite() {
            planner.prune_and_rebuild(cbar, cbar)?;
        }
        let goal = CostBoundedGoal::new(cbar)?;
        let budget = Budget {
            deadline: trial_time.map(|d| Instant::now() + d),
            max_iterations: trial_iterations,
        };
        match planner.plan_feasible(&goal, &budget, &mut rng, &mut crate::planners::NullMonitor)? {
            PlanOutcome::Found(node) => {
                costs.push(lifted.lifted_terminal_cost(&planner.tree().node(node).z));
            }
            PlanOutcome::Exhausted => failures += 1,
        }
    }
    let mean_cost = if costs.is_empty() {
        None
    } else {
        Some(costs.iter().sum::<f64>() / costs.len() as f64)
    };
    let w_hat = match (mean_cost, cbar.is_finite()) {
        (Some(mean), true) => Some(1.0 - (mean - c_star) / (cbar - c_star)),
        _ => None,
    };
    Ok(ShrinkageEstimate { cbar, c_star, costs, failures, mean_cost, w_hat })
}

/// Closed-form expected-runtime bound for the EST feasible planner as a
/// function of the reachable goal volume `g` and the space's visibility
/// constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RuntimeBound {
    pub gamma: f64,
    pub delta: f64,
    /// Upper bound on the expected number of samples to a solution.
    pub expected_samples: f64,
}

/// Evaluates γ = 8/β, δ = αβ/(2 + 2αβ), and
/// E[t] ≤ (ln γ + ln ln(1/g)) / (δ g) + 1 / (1 − e^(−δ g)).
pub fn est_runtime_bound(goal_volume: f64, alpha: f64, beta: f64) -> Result<RuntimeBound> {
    if !(goal_volume > 0.0 && goal_volume < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "goal volume must lie in (0, 1), got {goal_volume}"
        )));
    }
    if !(alpha > 0.0) || !(beta > 0.0) {
        return Err(Error::InvalidParameter("visibility constants must be positive".into()));
    }
    let gamma = 8.0 / beta;
    let delta = alpha * beta / (2.0 + 2.0 * alpha * beta);
    let g = goal_volume;
    let expected_samples =
        (gamma.ln() + (1.0 / g).ln().ln()) / (delta * g) + 1.0 / (1.0 - (-delta * g).exp());
    Ok(RuntimeBound { gamma, delta, expected_samples })
}
