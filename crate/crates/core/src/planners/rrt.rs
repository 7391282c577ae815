//! RRT extension: pull the tree toward a random target in the lifted space.

use rand::Rng;

use crate::error::Result;
use crate::nn::KdTree;
use crate::space::StateVector;
use crate::statecost::{should_prune, AugmentedState, CostBoundedGoal, LiftedSystem};
use crate::system::{check_segment_feasible, propagate, ControlSystem};

use super::{Extension, PlanTree, PlannerConfig};

/// Samples the extension target: with probability `goal_bias` a point of the
/// cost-bounded goal set (rejection sampling over the goal bounding box,
/// falling back to uniform after 100 misses), otherwise uniform over the
/// bounds with the cost axis clipped to the incumbent bound.
fn sample_target<S: ControlSystem, R: Rng>(
    sys: &LiftedSystem<S>,
    goal: &CostBoundedGoal,
    cfg: &PlannerConfig,
    cost_hi: f64,
    rng: &mut R,
) -> Result<StateVector> {
    let base = sys.base();
    if cfg.goal_bias > 0.0 && rng.gen::<f64>() < cfg.goal_bias {
        if let Some(goal_box) = base.goal_bounds() {
            for _ in 0..100 {
                let x = goal_box.sample_uniform(rng)?;
                if base.in_goal(&x) {
                    let hi = if goal.is_bounded() {
                        (goal.cbar() - base.terminal_cost(&x)).max(0.0)
                    } else {
                        cost_hi
                    };
                    let mut target = x;
                    target.push(rng.gen_range(0.0..=hi));
                    return Ok(target);
                }
            }
        }
    }
    let mut target = base.state_bounds().sample_uniform(rng)?;
    target.push(rng.gen_range(0.0..=cost_hi));
    Ok(target)
}

/// One RRT extension attempt: sample a target, extend its nearest tree node
/// with a sampled (or target-steered) control, and keep the new node if the
/// whole segment is feasible and survives heuristic pruning.
pub fn rrt_extend<S: ControlSystem, R: Rng>(
    tree: &mut PlanTree,
    sys: &LiftedSystem<S>,
    goal: &CostBoundedGoal,
    cfg: &PlannerConfig,
    cost_scale: f64,
    kd: &mut KdTree,
    rng: &mut R,
) -> Result<Extension> {
    let cbar = goal.cbar();
    let cost_hi = if goal.is_bounded() { cbar } else { cost_scale };
    let target = sample_target(sys, goal, cfg, cost_hi, rng)?;

    let (near_id, _) = kd.nearest(&target)?;
    let z_near = tree.node(near_id).z.as_vector().clone();

    let (control, duration) = match sys.steer_toward(&z_near, &target, rng) {
        Some(steered) => steered,
        None => sys.sample_control(&z_near, rng),
    };

    let prop = match propagate(sys, &z_near, &control, duration) {
        Ok(p) => p,
        Err(_) => return Ok(Extension::Rejected),
    };
    if !check_segment_feasible(sys, &prop.states) {
        return Ok(Extension::Rejected);
    }

    let z_new = AugmentedState::from_vector(prop.end().clone());
    let base = sys.base();
    if should_prune(&z_new, cbar, |x| base.heuristic(x)) {
        return Ok(Extension::Rejected);
    }

    let vector = z_new.as_vector().clone();
    let id = tree.add(near_id, control, duration, z_new);
    kd.insert(id, vector);
    Ok(Extension::Added(id))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planners::PlanTree;
    use crate::problems::{make_dubins, make_kink};
    use crate::statecost::lift;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kinematic_extensions_respect_max_expansion() {
        let lifted = lift(make_kink());
        let cfg = PlannerConfig::default();
        let goal = CostBoundedGoal::unbounded();
        let metric = lifted.base().default_metric().extended(0.0);
        let root = AugmentedState::from_vector(lifted.start().clone());
        let mut tree = PlanTree::new(root.clone());
        let mut kd = KdTree::new(metric);
        kd.insert(PlanTree::ROOT, root.as_vector().clone());
        let mut rng = ChaCha8Rng::seed_from_u64(2);

        let mut added = 0;
        for _ in 0..500 {
            if let Extension::Added(id) =
                rrt_extend(&mut tree, &lifted, &goal, &cfg, 1.0, &mut kd, &mut rng).unwrap()
            {
                let n = tree.node(id);
                let p = tree.node(n.parent.unwrap());
                let dx = n.z.state_coords()[0] - p.z.state_coords()[0];
                let dy = n.z.state_coords()[1] - p.z.state_coords()[1];
                let len = (dx * dx + dy * dy).sqrt();
                assert!(len <= 0.15 + 1e-9, "segment length {len} exceeds the cap");
                // Path-length cost-to-come advances by exactly the segment length.
                assert!((n.z.cost() - p.z.cost() - len).abs() < 1e-9);
                added += 1;
            }
        }
        assert!(added > 100, "too few accepted extensions: {added}");
    }

    #[test]
    fn dubins_extensions_use_bounded_durations() {
        let lifted = lift(make_dubins());
        let cfg = PlannerConfig::default();
        let goal = CostBoundedGoal::unbounded();
        let metric = lifted.base().default_metric().extended(0.0);
        let root = AugmentedState::from_vector(lifted.start().clone());
        let mut tree = PlanTree::new(root.clone());
        let mut kd = KdTree::new(metric);
        kd.insert(PlanTree::ROOT, root.as_vector().clone());
        let mut rng = ChaCha8Rng::seed_from_u64(3);

        for _ in 0..300 {
            if let Extension::Added(id) =
                rrt_extend(&mut tree, &lifted, &goal, &cfg, 1.0, &mut kd, &mut rng).unwrap()
            {
                let n = tree.node(id);
                assert!((0.0..=0.25).contains(&n.duration));
            }
        }
        assert!(tree.alive_count() > 50);
    }

    #[test]
    fn infeasible_extensions_leave_tree_unchanged() {
        // Target deep inside the wall: extensions that would cross it are
        // rejected and the tree keeps its size.
        let kink = make_kink();
        let lifted = lift(&kink);
        let cfg = PlannerConfig { goal_bias: 0.0, ..Default::default() };
        let goal = CostBoundedGoal::unbounded();
        let metric = lifted.base().default_metric().extended(0.0);
        // Seed the tree with a node right next to the wall face.
        let near_wall =
            AugmentedState::new(&crate::space::StateVector::new(vec![0.415, 0.2]), 0.0);
        let mut tree = PlanTree::new(near_wall.clone());
        let mut kd = KdTree::new(metric);
        kd.insert(PlanTree::ROOT, near_wall.as_vector().clone());
        let mut rng = ChaCha8Rng::seed_from_u64(4);

        for _ in 0..2000 {
            let before = tree.alive_count();
            match rrt_extend(&mut tree, &lifted, &goal, &cfg, 1.0, &mut kd, &mut rng).unwrap() {
                Extension::Added(id) => {
                    // Every accepted node is feasible in the base space.
                    assert!(kink.feasible(&tree.node(id).z.state_vector()));
                }
                Extension::Rejected => assert_eq!(tree.alive_count(), before),
            }
        }
    }

    #[test]
    fn goal_biased_targets_land_in_goal_projection() {
        let kink = make_kink();
        let lifted = lift(&kink);
        let cfg = PlannerConfig { goal_bias: 1.0, ..Default::default() };
        let goal = CostBoundedGoal::new(2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let t = sample_target(&lifted, &goal, &cfg, 2.0, &mut rng).unwrap();
            let x = crate::space::StateVector::new(t.coords()[..2].to_vec());
            assert!(kink.in_goal(&x), "biased sample missed the goal projection");
            let c = t.coords()[2];
            assert!((0.0..=2.0).contains(&c), "cost coordinate outside [0, cbar]");
        }
    }
}
