//! Dubins-style car asked to translate sideways with minimal execution time.
//!
//! State (x, y, θ); control (v, φ) with v ∈ {−1, +1} and steering angle
//! φ ∈ [−π, π], clamped to ±φ_max inside the dynamics. The car model is the
//! standard unit-wheelbase reconstruction ẋ = v cos θ, ẏ = v sin θ,
//! θ̇ = v tan(φ̂); φ_max = 1.3 rad gives a minimum turning radius of about
//! 0.28, which makes the 0.4-unit sideways move a genuine multi-arc
//! maneuver inside the unit square.

use std::f64::consts::{PI, TAU};

use rand::{Rng, RngCore};

use crate::space::{BoxBounds, ControlVector, Metric, StateVector};
use crate::system::{ControlSystem, IntegrationMode};

const PHI_MAX: f64 = 1.3;
const MAX_DURATION: f64 = 0.25;
const GOAL_TOL: f64 = 0.1;

/// Sideways-translation car problem in the unit square.
#[derive(Clone, Debug)]
pub struct DubinsCar {
    bounds: BoxBounds,
    start: StateVector,
    goal: StateVector,
    metric: Metric,
}

impl DubinsCar {
    pub fn new() -> Self {
        let bounds = BoxBounds::new(vec![0.0, 0.0, -PI], vec![1.0, 1.0, PI]).expect("valid");
        Self {
            bounds,
            start: StateVector::new(vec![0.5, 0.3, 0.0]),
            goal: StateVector::new(vec![0.5, 0.7, 0.0]),
            // d((x,y,θ), (x',y',θ')) = sqrt(dx² + dy² + d_θ²/(2π))
            metric: Metric::weighted(vec![1.0, 1.0, 1.0 / TAU])
                .expect("valid weights")
                .with_angle(2),
        }
    }

    pub fn goal_state(&self) -> &StateVector {
        &self.goal
    }
}

impl Default for DubinsCar {
    fn default() -> Self {
        Self::new()
    }
}

impl ControlSystem for DubinsCar {
    fn dim_state(&self) -> usize {
        3
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
        let v = u[0];
        let phi = u[1].clamp(-PHI_MAX, PHI_MAX);
        let theta = x[2];
        StateVector::new(vec![v * theta.cos(), v * theta.sin(), v * phi.tan()])
    }

    /// Minimal execution time: L ≡ 1.
    fn incremental_cost(&self, _x: &StateVector, _u: &ControlVector) -> f64 {
        1.0
    }

    fn feasible(&self, x: &StateVector) -> bool {
        // Heading is unconstrained (it wraps); only the position is boxed.
        (0.0..=1.0).contains(&x[0]) && (0.0..=1.0).contains(&x[1])
    }

    fn in_goal(&self, x: &StateVector) -> bool {
        self.metric.distance_unchecked(x.coords(), self.goal.coords()) <= GOAL_TOL
    }

    fn sample_control(&self, _x: &StateVector, rng: &mut dyn RngCore) -> (ControlVector, f64) {
        let v = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let phi = rng.gen_range(-PI..=PI);
        let duration = rng.gen_range(0.0..=MAX_DURATION);
        (ControlVector::new(vec![v, phi]), duration)
    }

    fn integration_mode(&self) -> IntegrationMode {
        IntegrationMode::FixedStep { dt: 0.01 }
    }

    fn heuristic(&self, x: &StateVector) -> f64 {
        // Planar speed is exactly 1, so remaining time is at least the
        // planar distance less the goal tolerance.
        let d = ((x[0] - self.goal[0]).powi(2) + (x[1] - self.goal[1]).powi(2)).sqrt();
        (d - GOAL_TOL).max(0.0)
    }

    fn goal_bounds(&self) -> Option<BoxBounds> {
        // Metric ball bounding box: dθ²/(2π) ≤ tol² gives |dθ| ≤ tol·sqrt(2π).
        let dtheta = GOAL_TOL * TAU.sqrt();
        Some(
            BoxBounds::new(
                vec![
                    (self.goal[0] - GOAL_TOL).max(0.0),
                    (self.goal[1] - GOAL_TOL).max(0.0),
                    self.goal[2] - dtheta,
                ],
                vec![
                    (self.goal[0] + GOAL_TOL).min(1.0),
                    (self.goal[1] + GOAL_TOL).min(1.0),
                    self.goal[2] + dtheta,
                ],
            )
            .expect("valid goal box"),
        )
    }

    fn default_metric(&self) -> Metric {
        self.metric.clone()
    }
}
