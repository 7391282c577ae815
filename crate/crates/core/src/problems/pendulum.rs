//! Torque-limited pendulum swing-up in minimal time.
//!
//! State (θ, ω) with θ = 0 hanging down; dynamics θ̇ = ω,
//! ω̇ = −9.8 sin(θ) + τ with bang-bang torque τ ∈ {−2, 0, 2} N·m held for a
//! uniformly sampled duration in [0, 0.5] s, integrated at dt = 0.01 s.
//! The torque stalls against gravity at asin(2/9.8) ≈ 11.8°, so the only
//! route to the inverted goal is pumping energy by swinging.

use std::f64::consts::{PI, TAU};

use rand::{Rng, RngCore};

use crate::space::{angular_difference, BoxBounds, ControlVector, Metric, StateVector};
use crate::system::{ControlSystem, IntegrationMode};

const GRAVITY: f64 = 9.8;
const TORQUES: [f64; 3] = [-2.0, 0.0, 2.0];
const MAX_DURATION: f64 = 0.5;
const DT: f64 = 0.01;
const GOAL_ANGLE_TOL: f64 = 10.0 * PI / 180.0;
const GOAL_SPEED_TOL: f64 = 0.5;
const OMEGA_MAX: f64 = 8.0;

/// Swing-up problem for a unit-mass, unit-length pendulum.
#[derive(Clone, Debug)]
pub struct Pendulum {
    bounds: BoxBounds,
    start: StateVector,
}

impl Pendulum {
    pub fn new() -> Self {
        Self {
            bounds: BoxBounds::new(vec![0.0, -OMEGA_MAX], vec![TAU, OMEGA_MAX]).expect("valid"),
            start: StateVector::new(vec![0.0, 0.0]),
        }
    }

    /// Angle at which the strongest torque is cancelled by gravity.
    pub fn stall_angle() -> f64 {
        (2.0 / GRAVITY).asin()
    }
}

impl Default for Pendulum {
    fn default() -> Self {
        Self::new()
    }
}

impl ControlSystem for Pendulum {
    fn dim_state(&self) -> usize {
        2
    }

    fn dim_control(&self) -> usize {
        1
    }

    fn state_bounds(&self) -> &BoxBounds {
        &self.bounds
    }

    fn start(&self) -> &StateVector {
        &self.start
    }

    fn derivative(&self, x: &StateVector, u: &ControlVector) -> StateVector {
        StateVector::new(vec![x[1], -GRAVITY * x[0].sin() + u[0]])
    }

    fn incremental_cost(&self, _x: &StateVector, _u: &ControlVector) -> f64 {
        1.0
    }

    fn feasible(&self, x: &StateVector) -> bool {
        // The angle is free (it wraps); only the angular rate is limited.
        x[1].abs() <= OMEGA_MAX
    }

    fn in_goal(&self, x: &StateVector) -> bool {
        angular_difference(x[0], PI, TAU) <= GOAL_ANGLE_TOL && x[1].abs() < GOAL_SPEED_TOL
    }

    fn sample_control(&self, _x: &StateVector, rng: &mut dyn RngCore) -> (ControlVector, f64) {
        let tau = TORQUES[rng.gen_range(0..TORQUES.len())];
        (ControlVector::new(vec![tau]), rng.gen_range(0.0..=MAX_DURATION))
    }

    fn integration_mode(&self) -> IntegrationMode {
        IntegrationMode::FixedStep { dt: DT }
    }

    fn heuristic(&self, x: &StateVector) -> f64 {
        // |θ̇| ≤ ω_max bounds how fast the angle shortfall can close.
        (angular_difference(x[0], PI, TAU) - GOAL_ANGLE_TOL).max(0.0) / OMEGA_MAX
    }

    fn goal_bounds(&self) -> Option<BoxBounds> {
        Some(
            BoxBounds::new(
                vec![PI - GOAL_ANGLE_TOL, -GOAL_SPEED_TOL],
                vec![PI + GOAL_ANGLE_TOL, GOAL_SPEED_TOL],
            )
            .expect("valid goal box"),
        )
    }

    fn default_metric(&self) -> Metric {
        Metric::weighted(vec![1.0, 1.0]).expect("valid").with_angle(0)
    }
}
