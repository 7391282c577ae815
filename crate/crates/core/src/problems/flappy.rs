//! Flappy: cross a 1000×600 px screen at fixed horizontal speed, choosing
//! at each moment between free fall and a sharp upward thrust.
//!
//! State (x, y, v_y); ẋ = 5, ẏ = v_y, v̇_y = −1 + 4u with binary u. Segments
//! are exact piecewise parabolas and both cost functions are evaluated in
//! closed form: plain arc length, or arc length accrued only below the
//! half-screen line y = 300.

use rand::{Rng, RngCore};

use crate::problems::world::RectObstacleWorld;
use crate::space::{BoxBounds, ControlVector, Metric, StateVector};
use crate::system::{ControlSystem, IntegrationMode};

const VX: f64 = 5.0;
const VY_MAX: f64 = 40.0;
const MAX_DURATION: f64 = 1.0;
const HALF_SCREEN_Y: f64 = 300.0;

/// Which objective the planner minimizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlappyCost {
    /// Total path length in pixels.
    Length,
    /// Path length accrued only while y < 300 px.
    LowAltitude,
}

/// The screen-crossing problem over a rectangle-obstacle world.
#[derive(Clone, Debug)]
pub struct Flappy {
    world: RectObstacleWorld,
    cost: FlappyCost,
    bounds: BoxBounds,
    start: StateVector,
}

impl Flappy {
    pub fn new(world: RectObstacleWorld, cost: FlappyCost) -> Self {
        let d = world.domain;
        let bounds = BoxBounds::new(
            vec![d.x, d.y, -VY_MAX],
            vec![d.x + d.w, d.y + d.h, VY_MAX],
        )
        .expect("valid domain");
        let start = StateVector::new(vec![world.start[0], world.start[1], 0.0]);
        Self { world, cost, bounds, start }
    }

    pub fn world(&self) -> &RectObstacleWorld {
        &self.world
    }

    pub fn cost_kind(&self) -> FlappyCost {
        self.cost
    }

    fn acceleration(u: f64) -> f64 {
        -1.0 + 4.0 * u
    }

    /// Antiderivative of the speed sqrt(VX² + w²) with respect to w.
    fn speed_antiderivative(w: f64) -> f64 {
        0.5 * (w * (VX * VX + w * w).sqrt() + VX * VX * (w / VX).asinh())
    }

    /// Exact arc length of (5t, y(t)) over [t0, t1] with v_y(t) = v0 + a·t.
    fn arc_length(v0: f64, a: f64, t0: f64, t1: f64) -> f64 {
        debug_assert!(a != 0.0);
        (Self::speed_antiderivative(v0 + a * t1) - Self::speed_antiderivative(v0 + a * t0)) / a
    }

    /// Arc length restricted to the sub-intervals of [0, t] where y < 300.
    fn low_altitude_length(y0: f64, v0: f64, a: f64, t: f64) -> f64 {
        // y(s) = y0 + v0 s + a s²/2; split at crossings of y = 300.
        let mut cuts = vec![0.0];
        let (qa, qb, qc) = (a / 2.0, v0, y0 - HALF_SCREEN_Y);
        let disc = qb * qb - 4.0 * qa * qc;
        if disc > 0.0 {
            let sq = disc.sqrt();
            for root in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
                if root > 0.0 && root < t {
                    cuts.push(root);
                }
            }
        }
        cuts.push(t);
        cuts.sort_by(f64::total_cmp);
        let mut length = 0.0;
        for pair in cuts.windows(2) {
            let (s0, s1) = (pair[0], pair[1]);
            if s1 - s0 <= 0.0 {
                continue;
            }
            let mid = 0.5 * (s0 + s1);
            if y0 + v0 * mid + a * mid * mid / 2.0 < HALF_SCREEN_Y {
                length += Self::arc_length(v0, a, s0, s1);
            }
        }
        length
    }
}

impl ControlSystem for Flappy {
    fn dim_state(&self) -> usize {
        3
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
        StateVector::new(vec![VX, x[2], Self::acceleration(u[0])])
    }

    fn incremental_cost(&self, x: &StateVector, _u: &ControlVector) -> f64 {
        let speed = (VX * VX + x[2] * x[2]).sqrt();
        match self.cost {
            FlappyCost::Length => speed,
            FlappyCost::LowAltitude => {
                if x[1] < HALF_SCREEN_Y {
                    speed
                } else {
                    0.0
                }
            }
        }
    }

    fn feasible(&self, x: &StateVector) -> bool {
        x[2].abs() <= VY_MAX && self.world.point_free(x[0], x[1])
    }

    fn in_goal(&self, x: &StateVector) -> bool {
        self.world.in_goal(x[0], x[1])
    }

    fn sample_control(&self, _x: &StateVector, rng: &mut dyn RngCore) -> (ControlVector, f64) {
        let u = if rng.gen_bool(0.5) { 1.0 } else { 0.0 };
        (ControlVector::new(vec![u]), rng.gen_range(0.0..=MAX_DURATION))
    }

    fn integration_mode(&self) -> IntegrationMode {
        IntegrationMode::ClosedForm { sample_dt: 0.05 }
    }

    fn closed_form_step(
        &self,
        x: &StateVector,
        u: &ControlVector,
        t: f64,
    ) -> Option<(StateVector, f64)> {
        let a = Self::acceleration(u[0]);
        let (y0, v0) = (x[1], x[2]);
        let end = StateVector::new(vec![
            x[0] + VX * t,
            y0 + v0 * t + a * t * t / 2.0,
            v0 + a * t,
        ]);
        let cost = match self.cost {
            FlappyCost::Length => Self::arc_length(v0, a, 0.0, t),
            FlappyCost::LowAltitude => Self::low_altitude_length(y0, v0, a, t),
        };
        Some((end, cost))
    }

    fn heuristic(&self, x: &StateVector) -> f64 {
        match self.cost {
            // Path length is at least the straight distance to the goal rect.
            FlappyCost::Length => self.world.goal_distance(x[0], x[1]),
            // The low-altitude integrand can vanish; no useful bound.
            FlappyCost::LowAltitude => 0.0,
        }
    }

    fn goal_bounds(&self) -> Option<BoxBounds> {
        let b = self.world.goal_bbox();
        Some(
            BoxBounds::new(
                vec![b.x, b.y, -VY_MAX],
                vec![b.x + b.w, b.y + b.h, VY_MAX],
            )
            .expect("valid goal box"),
        )
    }

    fn default_metric(&self) -> Metric {
        Metric::euclidean(3)
    }
}
