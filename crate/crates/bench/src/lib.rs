//! Shared setup for the criterion benchmarks: pre-grown planner state over
//! the benchmark problems.

use aox_core::nn::{DensityGrid, KdTree};
use aox_core::planners::{PlannerConfig, PlannerKind, TreePlanner};
use aox_core::problems::{make_kink, Kinematic2d};
use aox_core::space::StateVector;
use aox_core::statecost::{lift, CostBoundedGoal, LiftedSystem};
use aox_core::system::ControlSystem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random points in the lifted Kink space (x, y, cost).
pub fn lifted_kink_points(n: usize, seed: u64) -> Vec<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            StateVector::new(vec![
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.0..2.0),
            ])
        })
        .collect()
}

/// KD-tree over `n` lifted Kink points under the cost-weighted metric.
pub fn populated_kd(n: usize) -> KdTree {
    let sys = make_kink();
    let metric = sys.default_metric().extended(1.0);
    let mut kd = KdTree::new(metric);
    for (i, p) in lifted_kink_points(n, 1).into_iter().enumerate() {
        kd.insert(i, p);
    }
    kd
}

/// Density grid over `n` lifted Kink points.
pub fn populated_grid(n: usize) -> DensityGrid {
    let sys = make_kink();
    let bounds = sys.state_bounds().clone();
    let mut grid = DensityGrid::new(&bounds, 2.0, 0.1, 3).unwrap();
    for (i, p) in lifted_kink_points(n, 2).into_iter().enumerate() {
        grid.insert(i, &p);
    }
    grid
}

pub fn lifted_kink() -> LiftedSystem<Kinematic2d> {
    lift(make_kink())
}

/// A planner over the lifted Kink problem pre-grown to roughly `n` nodes.
pub fn grown_planner(
    lifted: &LiftedSystem<Kinematic2d>,
    kind: PlannerKind,
    n: usize,
) -> (TreePlanner<'_, Kinematic2d>, ChaCha8Rng) {
    let cfg = PlannerConfig { cost_weight: 1.0, ..Default::default() };
    let mut planner = TreePlanner::new(lifted, kind, cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let goal = CostBoundedGoal::unbounded();
    while planner.tree().alive_count() < n {
        let _ = planner.extend(&goal, &mut rng).unwrap();
    }
    (planner, rng)
}
