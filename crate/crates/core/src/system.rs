//! The control-system interface, trajectories, forward propagation, and
//! cost evaluation.
//!
//! A system is the problem tuple: dynamics, control sampling, incremental and
//! terminal cost, feasibility and goal predicates, and a start state. Forward
//! propagation integrates one (control, duration) segment and accumulates the
//! incremental cost along the *same* partition, so that the cost-to-come a
//! planner carries and the cost of the final reported trajectory agree
//! bit-for-bit.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::space::{BoxBounds, ControlVector, Metric, StateVector};

/// How a system's segments are integrated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntegrationMode {
    /// Fixed-step 4th-order Runge-Kutta at step `dt` (with a shortened final
    /// step when the duration is not a multiple of `dt`).
    FixedStep { dt: f64 },
    /// Exact per-segment formula supplied by the system; intermediate states
    /// are emitted every `sample_dt` seconds for feasibility checking.
    ClosedForm { sample_dt: f64 },
}

/// A kinodynamic planning problem as a uniform callable interface.
pub trait ControlSystem {
    fn dim_state(&self) -> usize;
    fn dim_control(&self) -> usize;
    fn state_bounds(&self) -> &BoxBounds;
    fn start(&self) -> &StateVector;

    /// Dynamics ẋ = D(x, u).
    fn derivative(&self, x: &StateVector, u: &ControlVector) -> StateVector;

    /// Incremental cost L(x, u) ≥ 0.
    fn incremental_cost(&self, x: &StateVector, u: &ControlVector) -> f64;

    /// Terminal cost Φ(x) ≥ 0.
    fn terminal_cost(&self, _x: &StateVector) -> f64 {
        0.0
    }

    /// Kinematic/state constraints (obstacles, actuator envelopes).
    fn feasible(&self, x: &StateVector) -> bool;

    /// Goal-region membership.
    fn in_goal(&self, x: &StateVector) -> bool;

    /// One random control together with its application duration.
    fn sample_control(&self, x: &StateVector, rng: &mut dyn RngCore) -> (ControlVector, f64);

    fn integration_mode(&self) -> IntegrationMode;

    /// Exact state and accumulated cost after applying `u` for time `t`.
    /// Required when [`integration_mode`](Self::integration_mode) is
    /// `ClosedForm`.
    fn closed_form_step(
        &self,
        _x: &StateVector,
        _u: &ControlVector,
        _t: f64,
    ) -> Option<(StateVector, f64)> {
        None
    }

    /// Exact continuous feasibility for a straight segment, when the system
    /// can decide it without sampling (kinematic problems with polygonal
    /// obstacles). `None` falls back to per-state checks.
    fn segment_feasible(&self, _a: &StateVector, _b: &StateVector) -> Option<bool> {
        None
    }

    /// Target-aware control sampling for planners that pull toward a sampled
    /// state. `None` falls back to [`sample_control`](Self::sample_control).
    fn steer_toward(
        &self,
        _from: &StateVector,
        _target: &StateVector,
        _rng: &mut dyn RngCore,
    ) -> Option<(ControlVector, f64)> {
        None
    }

    /// Admissible cost-to-go lower bound; 0 when no bound is known.
    fn heuristic(&self, _x: &StateVector) -> f64 {
        0.0
    }

    /// Bounding box of the goal region, for goal-biased sampling.
    fn goal_bounds(&self) -> Option<BoxBounds> {
        None
    }

    /// Metric the planners use over this system's state space by default.
    fn default_metric(&self) -> Metric {
        Metric::euclidean(self.dim_state())
    }
}

impl<S: ControlSystem + ?Sized> ControlSystem for &S {
    fn dim_state(&self) -> usize {
        (**self).dim_state()
    }
    fn dim_control(&self) -> usize {
        (**self).dim_control()
    }
    fn state_bounds(&self) -> &BoxBounds {
        (**self).state_bounds()
    }
    fn start(&self) -> &StateVector {
        (**self).start()
    }
    fn derivative(&self, x: &StateVector, u: &ControlVector) -> StateVector {
        (**self).derivative(x, u)
    }
    fn incremental_cost(&self, x: &StateVector, u: &ControlVector) -> f64 {
        (**self).incremental_cost(x, u)
    }
    fn terminal_cost(&self, x: &StateVector) -> f64 {
        (**self).terminal_cost(x)
    }
    fn feasible(&self, x: &StateVector) -> bool {
        (**self).feasible(x)
    }
    fn in_goal(&self, x: &StateVector) -> bool {
        (**self).in_goal(x)
    }
    fn sample_control(&self, x: &StateVector, rng: &mut dyn RngCore) -> (ControlVector, f64) {
        (**self).sample_control(x, rng)
    }
    fn integration_mode(&self) -> IntegrationMode {
        (**self).integration_mode()
    }
    fn closed_form_step(
        &self,
        x: &StateVector,
        u: &ControlVector,
        t: f64,
    ) -> Option<(StateVector, f64)> {
        (**self).closed_form_step(x, u, t)
    }
    fn segment_feasible(&self, a: &StateVector, b: &StateVector) -> Option<bool> {
        (**self).segment_feasible(a, b)
    }
    fn steer_toward(
        &self,
        from: &StateVector,
        target: &StateVector,
        rng: &mut dyn RngCore,
    ) -> Option<(ControlVector, f64)> {
        (**self).steer_toward(from, target, rng)
    }
    fn heuristic(&self, x: &StateVector) -> f64 {
        (**self).heuristic(x)
    }
    fn goal_bounds(&self) -> Option<BoxBounds> {
        (**self).goal_bounds()
    }
    fn default_metric(&self) -> Metric {
        (**self).default_metric()
    }
}

/// One trajectory segment: apply `control` from `from` for `duration`.
#[derive(Clone, Debug)]
pub struct Segment {
    pub from: StateVector,
    pub control: ControlVector,
    pub duration: f64,
    pub to: StateVector,
}

/// A piecewise trajectory. Segments chain: each segment starts where the
/// previous one ended.
#[derive(Clone, Debug)]
pub struct Trajectory {
    start: StateVector,
    segments: Vec<Segment>,
    total_cost: Option<f64>,
}

impl Trajectory {
    pub fn new(start: StateVector) -> Self {
        Self { start, segments: Vec::new(), total_cost: None }
    }

    pub fn push(&mut self, control: ControlVector, duration: f64, to: StateVector) {
        debug_assert!(duration >= 0.0);
        let from = self.end().clone();
        self.segments.push(Segment { from, control, duration, to });
        self.total_cost = None;
    }

    pub fn start(&self) -> &StateVector {
        &self.start
    }

    pub fn end(&self) -> &StateVector {
        self.segments.last().map(|s| &s.to).unwrap_or(&self.start)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Cached value of the cost functional, once finalized.
    pub fn total_cost(&self) -> Option<f64> {
        self.total_cost
    }

    pub fn set_total_cost(&mut self, cost: f64) {
        self.total_cost = Some(cost);
    }

    /// Whether consecutive segments chain within `tol` per coordinate.
    pub fn is_chained(&self, tol: f64) -> bool {
        let mut prev = &self.start;
        for seg in &self.segments {
            if seg
                .from
                .coords()
                .iter()
                .zip(prev.coords())
                .any(|(a, b)| (a - b).abs() > tol)
            {
                return false;
            }
            prev = &seg.to;
        }
        true
    }
}

/// Result of propagating one (control, duration) segment: the visited states
/// (first entry is the initial state, last is the final state) and the
/// incremental cost accumulated along the same partition.
#[derive(Clone, Debug)]
pub struct Propagation {
    pub states: Vec<StateVector>,
    pub cost: f64,
}

impl Propagation {
    pub fn end(&self) -> &StateVector {
        self.states.last().expect("propagation contains at least the initial state")
    }
}

/// One RK4 step of the joint (state, cost) system. The cost coordinate uses
/// the same stage weighting, so integrating a lifted system's appended cost
/// coordinate and accumulating cost here produce identical values.
fn rk4_step<S: ControlSystem + ?Sized>(
    sys: &S,
    x: &StateVector,
    u: &ControlVector,
    dt: f64,
) -> (StateVector, f64) {
    let k1 = sys.derivative(x, u);
    let c1 = sys.incremental_cost(x, u);

    let x2 = stage(x, &k1, dt / 2.0);
    let k2 = sys.derivative(&x2, u);
    let c2 = sys.incremental_cost(&x2, u);

    let x3 = stage(x, &k2, dt / 2.0);
    let k3 = sys.derivative(&x3, u);
    let c3 = sys.incremental_cost(&x3, u);

    let x4 = stage(x, &k3, dt);
    let k4 = sys.derivative(&x4, u);
    let c4 = sys.incremental_cost(&x4, u);

    let mut out = Vec::with_capacity(x.dim());
    for i in 0..x.dim() {
        out.push(
            x.coords()[i]
                + dt / 6.0
                    * (k1.coords()[i]
                        + 2.0 * k2.coords()[i]
                        + 2.0 * k3.coords()[i]
                        + k4.coords()[i]),
        );
    }
    let dc = dt / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4);
    (StateVector::new(out), dc)
}

fn stage(x: &StateVector, k: &StateVector, h: f64) -> StateVector {
    let coords = x
        .coords()
        .iter()
        .zip(k.coords())
        .map(|(&xi, &ki)| xi + h * ki)
        .collect();
    StateVector::new(coords)
}

/// Forward-propagates `u` from `x0` for `duration`, returning the visited
/// states at integration resolution and the incremental cost along them.
pub fn propagate<S: ControlSystem + ?Sized>(
    sys: &S,
    x0: &StateVector,
    u: &ControlVector,
    duration: f64,
) -> Result<Propagation> {
    if duration < 0.0 {
        return Err(Error::InvalidParameter(format!("negative duration {duration}")));
    }
    let mut states = vec![x0.clone()];
    if duration == 0.0 {
        return Ok(Propagation { states, cost: 0.0 });
    }
    match sys.integration_mode() {
        IntegrationMode::FixedStep { dt } => {
            let mut t = 0.0;
            let mut cost = 0.0;
            let mut x = x0.clone();
            while t < duration - 1e-12 {
                let step = dt.min(duration - t);
                let (next, dc) = rk4_step(sys, &x, u, step);
                t += step;
                if !next.is_finite() {
                    return Err(Error::IntegrationDiverged {
                        t,
                        state: next.into_coords(),
                    });
                }
                cost += dc;
                states.push(next.clone());
                x = next;
            }
            Ok(Propagation { states, cost })
        }
        IntegrationMode::ClosedForm { sample_dt } => {
            let (end, cost) = sys
                .closed_form_step(x0, u, duration)
                .ok_or_else(|| Error::InvalidParameter("closed-form step not provided".into()))?;
            if !end.is_finite() {
                return Err(Error::IntegrationDiverged {
                    t: duration,
                    state: end.into_coords(),
                });
            }
            let n = (duration / sample_dt).ceil() as usize;
            for i in 1..n {
                let t = duration * i as f64 / n as f64;
                let (xi, _) = sys
                    .closed_form_step(x0, u, t)
                    .ok_or_else(|| Error::InvalidParameter("closed-form step not provided".into()))?;
                states.push(xi);
            }
            states.push(end);
            Ok(Propagation { states, cost })
        }
    }
}

/// Cost functional of a trajectory: the incremental cost integrated with the
/// same partition as [`propagate`], plus the terminal cost at the end state.
pub fn trajectory_cost<S: ControlSystem + ?Sized>(sys: &S, traj: &Trajectory) -> Result<f64> {
    let mut cost = 0.0;
    for seg in traj.segments() {
        cost += propagate(sys, &seg.from, &seg.control, seg.duration)?.cost;
    }
    Ok(cost + sys.terminal_cost(traj.end()))
}

/// Whether every state along a propagated segment is feasible. When the
/// system provides exact continuous segment tests, consecutive state pairs
/// are checked exactly instead.
pub fn check_segment_feasible<S: ControlSystem + ?Sized>(sys: &S, states: &[StateVector]) -> bool {
    assert!(!states.is_empty(), "segment must contain at least one state");
    if states.len() >= 2 {
        if let Some(ok) = sys.segment_feasible(&states[0], &states[1]) {
            if !ok || !sys.feasible(&states[0]) {
                return false;
            }
            for pair in states.windows(2).skip(1) {
                match sys.segment_feasible(&pair[0], &pair[1]) {
                    Some(true) => {}
                    _ => return false,
                }
            }
            return true;
        }
    }
    states.iter().all(|x| sys.feasible(x))
}
