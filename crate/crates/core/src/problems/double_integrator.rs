//! Planar double integrator: move a point with bounded velocity and
//! acceleration across the unit square in minimal time.
//!
//! State (q, v) ∈ [0,1]² × [−1,1]², control u ∈ [−5,5]², dynamics q̇ = v,
//! v̇ = u. The printed velocity bound "[−1,−1]²" in the source material is
//! an obvious typo for [−1,1]²; an empty box is impossible.

use rand::{Rng, RngCore};

use crate::space::{BoxBounds, ControlVector, Metric, StateVector};
use crate::system::{ControlSystem, IntegrationMode};

const MAX_DURATION: f64 = 0.05;
const GOAL_TOL: f64 = 0.2;

/// Minimum-time point-mass problem with bounded velocity and acceleration.
#[derive(Clone, Debug)]
pub struct DoubleIntegrator {
    bounds: BoxBounds,
    start: StateVector,
    goal: StateVector,
}

impl DoubleIntegrator {
    pub fn new() -> Self {
        Self {
            bounds: BoxBounds::new(vec![0.0, 0.0, -1.0, -1.0], vec![1.0, 1.0, 1.0, 1.0])
                .expect("valid"),
            start: StateVector::new(vec![0.06, 0.5, 0.0, 0.0]),
            goal: StateVector::new(vec![0.94, 0.5, 0.0, 0.0]),
        }
    }

    pub fn goal_state(&self) -> &StateVector {
        &self.goal
    }
}

impl Default for DoubleIntegrator {
    fn default() -> Self {
        Self::new()
    }
}

impl ControlSystem for DoubleIntegrator {
    fn dim_state(&self) -> usize {
        4
    }

    fn dim_control(&self) -> usize {
        2
    }

    fn state_bounds(&self) -> &BoxBounds {
        &self.bounds
    }

    fn start(&self) -> &StateVector {
        &self.start
    }

    fn derivative(&self, x: &StateVector, u: &ControlVector) -> StateVector {
        StateVector::new(vec![x[2], x[3], u[0], u[1]])
    }

    fn incremental_cost(&self, _x: &StateVector, _u: &ControlVector) -> f64 {
        1.0
    }

    fn feasible(&self, x: &StateVector) -> bool {
        self.bounds.contains(x)
    }

    fn in_goal(&self, x: &StateVector) -> bool {
        let d2: f64 = x
            .coords()
            .iter()
            .zip(self.goal.coords())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        d2.sqrt() <= GOAL_TOL
    }

    fn sample_control(&self, _x: &StateVector, rng: &mut dyn RngCore) -> (ControlVector, f64) {
        let u = ControlVector::new(vec![rng.gen_range(-5.0..=5.0), rng.gen_range(-5.0..=5.0)]);
        (u, rng.gen_range(0.0..=MAX_DURATION))
    }

    fn integration_mode(&self) -> IntegrationMode {
        IntegrationMode::FixedStep { dt: 0.01 }
    }

    fn heuristic(&self, x: &StateVector) -> f64 {
        // Speed is bounded by √2, so remaining time is at least the planar
        // shortfall divided by √2.
        let dq = ((x[0] - self.goal[0]).powi(2) + (x[1] - self.goal[1]).powi(2)).sqrt();
        (dq - GOAL_TOL).max(0.0) / std::f64::consts::SQRT_2
    }

    fn goal_bounds(&self) -> Option<BoxBounds> {
        Some(
            BoxBounds::new(
                vec![
                    (self.goal[0] - GOAL_TOL).max(0.0),
                    (self.goal[1] - GOAL_TOL).max(0.0),
                    -GOAL_TOL,
                    -GOAL_TOL,
                ],
                vec![
                    (self.goal[0] + GOAL_TOL).min(1.0),
                    (self.goal[1] + GOAL_TOL).min(1.0),
                    GOAL_TOL,
                    GOAL_TOL,
                ],
            )
            .expect("valid goal box"),
        )
    }

    fn default_metric(&self) -> Metric {
        Metric::euclidean(4)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::propagate;

    #[test]
    fn constant_acceleration_closed_form() {
        let sys = DoubleIntegrator::new();
        let p = propagate(&sys, sys.start(), &ControlVector::new(vec![5.0, 0.0]), 0.05).unwrap();
        // v = a t, q = q0 + a t²/2 (RK4 is exact for this system).
        assert!((p.end()[2] - 0.25).abs() < 1e-12);
        assert!((p.end()[0] - (0.06 + 0.00625)).abs() < 1e-12);
        assert!((p.cost - 0.05).abs() < 1e-12);
    }

    #[test]
    fn velocity_bounds_are_enforced_by_feasibility() {
        let sys = DoubleIntegrator::new();
        assert!(sys.feasible(&StateVector::new(vec![0.5, 0.5, 1.0, -1.0])));
        assert!(!sys.feasible(&StateVector::new(vec![0.5, 0.5, 1.2, 0.0])));
    }

    #[test]
    fn goal_tolerance_is_euclidean_over_full_state() {
        let sys = DoubleIntegrator::new();
        assert!(sys.in_goal(&StateVector::new(vec![0.94, 0.5, 0.0, 0.0])));
        assert!(sys.in_goal(&StateVector::new(vec![0.8, 0.5, 0.1, 0.0])));
        assert!(!sys.in_goal(&StateVector::new(vec![0.7, 0.5, 0.0, 0.0])));
    }
}
