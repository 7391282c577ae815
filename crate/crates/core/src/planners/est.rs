//! EST extension: grow from low-density regions of the explored set.

use rand::Rng;

use crate::error::Result;
use crate::nn::DensityGrid;
use crate::space::ControlVector;
use crate::statecost::{should_prune, AugmentedState, CostBoundedGoal, LiftedSystem};
use crate::system::{check_segment_feasible, propagate, ControlSystem, Propagation};

use super::{Extension, NodeId, PlanTree, PlannerConfig};

struct Candidate {
    source: NodeId,
    control: ControlVector,
    duration: f64,
    propagation: Propagation,
    weight: f64,
}

/// One EST extension attempt: draw `n_candidates` source nodes uniformly
/// from the occupied density cells, propagate one sampled control from
/// each, and add one feasible candidate chosen with probability
/// ∝ 1/(N(terminal)+1)², where N is the density count at the candidate's
/// terminal state.
pub fn est_extend<S: ControlSystem, R: Rng>(
    tree: &mut PlanTree,
    sys: &LiftedSystem<S>,
    goal: &CostBoundedGoal,
    cfg: &PlannerConfig,
    grid: &mut DensityGrid,
    rng: &mut R,
) -> Result<Extension> {
    let cbar = goal.cbar();
    let base = sys.base();
    let mut candidates: Vec<Candidate> = Vec::with_capacity(cfg.n_candidates);
    let mut total_weight = 0.0;

    for _ in 0..cfg.n_candidates {
        let source = grid.sample_source(rng)?;
        let z_src = tree.node(source).z.as_vector().clone();
        let (control, duration) = sys.sample_control(&z_src, rng);
        let propagation = match propagate(sys, &z_src, &control, duration) {
            Ok(p) => p,
            Err(_) => continue,
        };
        if !check_segment_feasible(sys, &propagation.states) {
            continue;
        }
        let z_new = AugmentedState::from_vector(propagation.end().clone());
        if should_prune(&z_new, cbar, |x| base.heuristic(x)) {
            continue;
        }
        let density = grid.count(propagation.end());
        let weight = 1.0 / ((density + 1) as f64).powf(cfg.selection_exponent);
        total_weight += weight;
        candidates.push(Candidate { source, control, duration, propagation, weight });
    }

    if candidates.is_empty() {
        return Ok(Extension::Rejected);
    }

    let mut pick = rng.gen::<f64>() * total_weight;
    let mut chosen = candidates.len() - 1;
    for (i, c) in candidates.iter().enumerate() {
        pick -= c.weight;
        if pick <= 0.0 {
            chosen = i;
            break;
        }
    }
    let c = candidates.swap_remove(chosen);
    let end = c.propagation.end().clone();
    let id = tree.add(c.source, c.control, c.duration, AugmentedState::from_vector(end.clone()));
    grid.insert(id, &end);
    Ok(Extension::Added(id))
}
