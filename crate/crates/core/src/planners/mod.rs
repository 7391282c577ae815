//! Kinodynamic tree planners (RRT and EST) over lifted state-cost systems.
//!
//! Both planners grow a tree rooted at the start by sampling a source node,
//! sampling a control and duration, and forward-integrating. They differ
//! only in how the source node and extension are chosen: RRT pulls toward a
//! uniformly sampled state (Voronoi bias) via nearest-neighbor queries, EST
//! samples sources inversely to the local tree density. Extensions that
//! leave the feasible set, or whose cost-to-come plus admissible cost-to-go
//! already exceeds the incumbent bound, are rejected.

mod est;
mod rrt;

pub use est::est_extend;
pub use rrt::rrt_extend;

use std::time::{Duration, Instant};

use rand::Rng;

use crate::error::Result;
use crate::nn::{DensityGrid, KdTree};
use crate::space::{ControlVector, Metric, StateVector};
use crate::statecost::{goal_contains, should_prune, AugmentedState, CostBoundedGoal, LiftedSystem};
use crate::system::{ControlSystem, Trajectory};

pub type NodeId = usize;

/// One tree node: an augmented state plus the edge that produced it.
/// Micro-states are not stored; edges replay exactly by re-propagating
/// (parent state, control, duration) through the deterministic integrator.
#[derive(Clone, Debug)]
pub struct TreeNode {
    pub z: AugmentedState,
    pub parent: Option<NodeId>,
    pub control: Option<ControlVector>,
    pub duration: f64,
    alive: bool,
}

/// Append-only tree of augmented states with tombstone pruning.
#[derive(Clone, Debug)]
pub struct PlanTree {
    nodes: Vec<TreeNode>,
    alive: usize,
}

impl PlanTree {
    pub fn new(root: AugmentedState) -> Self {
        let root = TreeNode { z: root, parent: None, control: None, duration: 0.0, alive: true };
        Self { nodes: vec![root], alive: 1 }
    }

    pub const ROOT: NodeId = 0;

    pub fn add(
        &mut self,
        parent: NodeId,
        control: ControlVector,
        duration: f64,
        z: AugmentedState,
    ) -> NodeId {
        debug_assert!(self.nodes[parent].alive, "extension from a pruned node");
        debug_assert!(
            z.cost() >= self.nodes[parent].z.cost() - 1e-12,
            "cost-to-come must be monotone along edges"
        );
        let id = self.nodes.len();
        self.nodes.push(TreeNode {
            z,
            parent: Some(parent),
            control: Some(control),
            duration,
            alive: true,
        });
        self.alive += 1;
        id
    }

    pub fn node(&self, id: NodeId) -> &TreeNode {
        &self.nodes[id]
    }

    /// Total slots including tombstoned nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn alive_count(&self) -> usize {
        self.alive
    }

    pub fn is_alive(&self, id: NodeId) -> bool {
        self.nodes[id].alive
    }

    pub fn alive_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.alive)
            .map(|(i, _)| i)
    }

    /// Node ids from the root to `id`, inclusive.
    pub fn path_from_root(&self, id: NodeId) -> Vec<NodeId> {
        let mut path = vec![id];
        let mut cur = id;
        while let Some(p) = self.nodes[cur].parent {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Tombstones every node whose cost-to-come plus heuristic exceeds
    /// `cbar`, along with all descendants of tombstoned nodes. The root is
    /// always retained so the planner keeps a seed. Returns the number of
    /// nodes pruned.
    pub fn prune<H>(&mut self, cbar: f64, heuristic: H) -> usize
    where
        H: Fn(&StateVector) -> f64,
    {
        let mut pruned = 0;
        // Children always follow parents in the arena, so one forward sweep
        // propagates structural death.
        for id in 0..self.nodes.len() {
            if !self.nodes[id].alive {
                continue;
            }
            let parent_dead = self.nodes[id]
                .parent
                .map_or(false, |p| !self.nodes[p].alive);
            let over_bound = should_prune(&self.nodes[id].z, cbar, &heuristic);
            if (parent_dead || over_bound) && id != Self::ROOT {
                self.nodes[id].alive = false;
                self.alive -= 1;
                pruned += 1;
            }
        }
        pruned
    }
}

/// Result of one extension attempt.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    Added(NodeId),
    Rejected,
}

/// Result of a feasible-planning call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanOutcome {
    /// The tree reached the cost-bounded goal at this node.
    Found(NodeId),
    /// The iteration or wall-clock budget ran out. Probabilistic
    /// completeness means this cannot certify infeasibility.
    Exhausted,
}

/// Wall-clock and iteration limits for a planning call.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub deadline: Option<Instant>,
    pub max_iterations: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn deadline_in(d: Duration) -> Self {
        Self { deadline: Some(Instant::now() + d), max_iterations: None }
    }

    pub fn iterations(n: u64) -> Self {
        Self { deadline: None, max_iterations: Some(n) }
    }

    pub fn exhausted(&self, used_iterations: u64) -> bool {
        self.max_iterations.map_or(false, |m| used_iterations >= m)
            || self.deadline.map_or(false, |d| Instant::now() >= d)
    }
}

/// Which feasible planner grows the tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlannerKind {
    Rrt,
    Est,
}

/// Tuning knobs shared by both planners.
#[derive(Clone, Debug)]
pub struct PlannerConfig {
    /// Probability that an RRT target is drawn from the goal region.
    pub goal_bias: f64,
    /// Candidate extensions per EST iteration.
    pub n_candidates: usize,
    /// EST selects candidates with probability ∝ 1/(N+1)^exponent.
    pub selection_exponent: f64,
    /// Weight of the cost axis in the RRT metric (0 ignores the cost axis).
    pub cost_weight: f64,
    /// Override for the state-space part of the metric; the problem's
    /// default metric otherwise.
    pub state_metric: Option<Metric>,
    /// EST grid resolution on unit-scaled coordinates.
    pub density_resolution: f64,
    /// EST projection dimension.
    pub density_projection_dim: usize,
    /// Iteration cap per inner call, used by the restart baselines.
    pub per_call_iteration_cap: Option<u64>,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            goal_bias: 0.05,
            n_candidates: 10,
            selection_exponent: 2.0,
            cost_weight: 0.0,
            state_metric: None,
            density_resolution: 0.1,
            density_projection_dim: 3,
            per_call_iteration_cap: None,
        }
    }
}

/// Observer hook for harness instrumentation; default methods ignore
/// everything.
pub trait SearchMonitor {
    fn on_iteration(&mut self, _total_iterations: u64, _tree_size: usize) {}
}

/// Monitor that ignores all events.
pub struct NullMonitor;

impl SearchMonitor for NullMonitor {}

/// A feasible planner instance: tree, proximity index, and configuration,
/// retained across meta-iterations.
pub struct TreePlanner<'s, S: ControlSystem> {
    sys: &'s LiftedSystem<S>,
    kind: PlannerKind,
    cfg: PlannerConfig,
    metric: Metric,
    tree: PlanTree,
    kd: Option<KdTree>,
    grid: Option<DensityGrid>,
    cost_scale: f64,
    iterations: u64,
}

impl<'s, S: ControlSystem> TreePlanner<'s, S> {
    pub fn new(sys: &'s LiftedSystem<S>, kind: PlannerKind, cfg: PlannerConfig) -> Result<Self> {
        let metric = cfg
            .state_metric
            .clone()
            .unwrap_or_else(|| sys.base().default_metric())
            .extended(cfg.cost_weight);
        let root = AugmentedState::from_vector(sys.start().clone());
        let tree = PlanTree::new(root);
        let mut planner = Self {
            sys,
            kind,
            cfg,
            metric,
            tree,
            kd: None,
            grid: None,
            cost_scale: 1.0,
            iterations: 0,
        };
        planner.rebuild_indices()?;
        Ok(planner)
    }

    pub fn kind(&self) -> PlannerKind {
        self.kind
    }

    pub fn tree(&self) -> &PlanTree {
        &self.tree
    }

    pub fn system(&self) -> &'s LiftedSystem<S> {
        self.sys
    }

    /// Cumulative extension attempts across all calls.
    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn config(&self) -> &PlannerConfig {
        &self.cfg
    }

    fn rebuild_indices(&mut self) -> Result<()> {
        match self.kind {
            PlannerKind::Rrt => {
                let items = self
                    .tree
                    .alive_ids()
                    .map(|id| (id, self.tree.node(id).z.as_vector().clone()))
                    .collect();
                self.kd = Some(KdTree::build(self.metric.clone(), items));
            }
            PlannerKind::Est => {
                let mut grid = DensityGrid::new(
                    self.sys.base().state_bounds(),
                    self.cost_scale,
                    self.cfg.density_resolution,
                    self.cfg.density_projection_dim,
                )?;
                for id in self.tree.alive_ids() {
                    grid.insert(id, self.tree.node(id).z.as_vector());
                }
                self.grid = Some(grid);
            }
        }
        Ok(())
    }

    /// One extension attempt against the cost-bounded goal.
    pub fn extend<R: Rng>(&mut self, goal: &CostBoundedGoal, rng: &mut R) -> Result<Extension> {
        match self.kind {
            PlannerKind::Rrt => rrt_extend(
                &mut self.tree,
                self.sys,
                goal,
                &self.cfg,
                self.cost_scale,
                self.kd.as_mut().expect("RRT planner carries a KD-tree"),
                rng,
            ),
            PlannerKind::Est => est_extend(
                &mut self.tree,
                self.sys,
                goal,
                &self.cfg,
                self.grid.as_mut().expect("EST planner carries a density grid"),
                rng,
            ),
        }
    }

    /// Whether `id` satisfies the goal, requiring strict improvement over a
    /// finite bound so that successive meta-iterations strictly decrease.
    fn accepts(&self, goal: &CostBoundedGoal, id: NodeId) -> bool {
        let z = &self.tree.node(id).z;
        goal_contains(goal, self.sys.base(), z)
            && (!goal.is_bounded() || self.sys.lifted_terminal_cost(z) < goal.cbar())
    }

    fn best_existing_goal_node(&self, goal: &CostBoundedGoal) -> Option<NodeId> {
        self.tree
            .alive_ids()
            .filter(|&id| self.accepts(goal, id))
            .min_by(|&a, &b| {
                self.sys
                    .lifted_terminal_cost(&self.tree.node(a).z)
                    .total_cmp(&self.sys.lifted_terminal_cost(&self.tree.node(b).z))
            })
    }

    /// Runs extensions until a tree node enters the cost-bounded goal or the
    /// budget runs out. The tree is retained across calls.
    pub fn plan_feasible<R: Rng, M: SearchMonitor + ?Sized>(
        &mut self,
        goal: &CostBoundedGoal,
        budget: &Budget,
        rng: &mut R,
        monitor: &mut M,
    ) -> Result<PlanOutcome> {
        if let Some(id) = self.best_existing_goal_node(goal) {
            return Ok(PlanOutcome::Found(id));
        }
        let mut used = 0u64;
        loop {
            if budget.exhausted(used) {
                return Ok(PlanOutcome::Exhausted);
            }
            used += 1;
            self.iterations += 1;
            monitor.on_iteration(self.iterations, self.tree.alive_count());
            if let Extension::Added(id) = self.extend(goal, rng)? {
                if self.accepts(goal, id) {
                    return Ok(PlanOutcome::Found(id));
                }
            }
        }
    }

    /// Prunes the tree against a new incumbent bound and rebuilds the
    /// proximity index, rescaling the EST cost axis by the new bound.
    pub fn prune_and_rebuild(&mut self, cbar: f64, cost_scale: f64) -> Result<usize> {
        let base = self.sys.base();
        let pruned = self.tree.prune(cbar, |x| base.heuristic(x));
        self.cost_scale = if cost_scale.is_finite() && cost_scale > 0.0 { cost_scale } else { 1.0 };
        self.rebuild_indices()?;
        Ok(pruned)
    }

    /// The base-space trajectory from the root to `id`, with the cost
    /// functional value cached on it.
    pub fn extract_trajectory(&self, id: NodeId) -> Trajectory {
        extract_trajectory(&self.tree, self.sys, id)
    }
}

/// Projects the root-to-node path into a base-space trajectory.
pub fn extract_trajectory<S: ControlSystem>(
    tree: &PlanTree,
    sys: &LiftedSystem<S>,
    id: NodeId,
) -> Trajectory {
    let path = tree.path_from_root(id);
    let mut traj = Trajectory::new(tree.node(PlanTree::ROOT).z.state_vector());
    for &nid in &path[1..] {
        let n = tree.node(nid);
        traj.push(
            n.control.clone().expect("non-root node has a control"),
            n.duration,
            n.z.state_vector(),
        );
    }
    traj.set_total_cost(sys.lifted_terminal_cost(&tree.node(id).z));
    traj
}
