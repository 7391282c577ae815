//! The state-cost lift: turning an optimal planning problem into a feasible
//! planning problem over states augmented with a cost-to-come coordinate.
//!
//! A lifted system is itself a [`ControlSystem`] of dimension `n + 1` whose
//! dynamics append ċ = L(x, u) and whose incremental cost is identically
//! zero; the original objective moves into the terminal cost c + Φ(x).
//! Bounding the admissible cost-to-come at the goal turns "find a path no
//! worse than c̄" into plain feasible planning.

use rand::RngCore;

use crate::error::Result;
use crate::space::{BoxBounds, ControlVector, Metric, StateVector};
use crate::system::{ControlSystem, IntegrationMode};

/// A state paired with its cost-to-come: z = (x, c).
///
/// Stored as one flat vector whose final coordinate is the cost, so indices
/// and metrics can treat it as an ordinary point in the lifted space.
#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedState {
    vector: StateVector,
}

impl AugmentedState {
    pub fn new(state: &StateVector, cost: f64) -> Self {
        debug_assert!(cost >= 0.0 && cost.is_finite(), "cost-to-come must be finite and ≥ 0");
        let mut vector = state.clone();
        vector.push(cost);
        Self { vector }
    }

    /// Interprets an existing vector's final coordinate as the cost.
    pub fn from_vector(vector: StateVector) -> Self {
        debug_assert!(vector.dim() >= 2, "augmented state needs at least (x, c)");
        Self { vector }
    }

    pub fn cost(&self) -> f64 {
        self.vector[self.vector.dim() - 1]
    }

    pub fn state_coords(&self) -> &[f64] {
        &self.vector.coords()[..self.vector.dim() - 1]
    }

    /// The base-space projection as an owned vector.
    pub fn state_vector(&self) -> StateVector {
        self.vector.truncated(self.vector.dim() - 1)
    }

    pub fn as_vector(&self) -> &StateVector {
        &self.vector
    }

    pub fn into_vector(self) -> StateVector {
        self.vector
    }
}

/// The base problem lifted into state-cost space.
#[derive(Clone, Debug)]
pub struct LiftedSystem<S> {
    base: S,
    bounds: BoxBounds,
    start: StateVector,
}

/// Lifts an optimal planning problem into an equivalent feasible problem
/// over (state, cost-to-come) with zero incremental cost.
pub fn lift<S: ControlSystem>(base: S) -> LiftedSystem<S> {
    let bounds = base.state_bounds().extended(0.0, f64::INFINITY);
    let start = AugmentedState::new(base.start(), 0.0).into_vector();
    LiftedSystem { base, bounds, start }
}

impl<S: ControlSystem> LiftedSystem<S> {
    pub fn base(&self) -> &S {
        &self.base
    }

    /// Terminal cost of the lifted problem: Φ̂(x, c) = c + Φ(x).
    pub fn lifted_terminal_cost(&self, z: &AugmentedState) -> f64 {
        z.cost() + self.base.terminal_cost(&z.state_vector())
    }

    fn split<'a>(&self, z: &'a StateVector) -> (&'a [f64], f64) {
        let n = self.base.dim_state();
        (&z.coords()[..n], z[n])
    }

    fn base_state(&self, z: &StateVector) -> StateVector {
        z.truncated(self.base.dim_state())
    }
}

impl<S: ControlSystem> ControlSystem for LiftedSystem<S> {
    fn dim_state(&self) -> usize {
        self.base.dim_state() + 1
    }

    fn dim_control(&self) -> usize {
        self.base.dim_control()
    }

    fn state_bounds(&self) -> &BoxBounds {
        &self.bounds
    }

    fn start(&self) -> &StateVector {
        &self.start
    }

    fn derivative(&self, z: &StateVector, u: &ControlVector) -> StateVector {
        let x = self.base_state(z);
        let mut d = self.base.derivative(&x, u);
        d.push(self.base.incremental_cost(&x, u));
        d
    }

    /// The lifted problem has no incremental cost; the objective lives in
    /// the terminal cost.
    fn incremental_cost(&self, _z: &StateVector, _u: &ControlVector) -> f64 {
        0.0
    }

    fn terminal_cost(&self, z: &StateVector) -> f64 {
        let (_, c) = self.split(z);
        c + self.base.terminal_cost(&self.base_state(z))
    }

    /// Feasibility ignores the cost coordinate: F × R⁺.
    fn feasible(&self, z: &StateVector) -> bool {
        let (_, c) = self.split(z);
        c.is_finite() && c >= 0.0 && self.base.feasible(&self.base_state(z))
    }

    /// The unbounded goal cylinder G × R⁺; cost bounds are applied by
    /// [`CostBoundedGoal`].
    fn in_goal(&self, z: &StateVector) -> bool {
        self.base.in_goal(&self.base_state(z))
    }

    fn sample_control(&self, z: &StateVector, rng: &mut dyn RngCore) -> (ControlVector, f64) {
        self.base.sample_control(&self.base_state(z), rng)
    }

    fn integration_mode(&self) -> IntegrationMode {
        self.base.integration_mode()
    }

    fn closed_form_step(
        &self,
        z: &StateVector,
        u: &ControlVector,
        t: f64,
    ) -> Option<(StateVector, f64)> {
        let (_, c) = self.split(z);
        let (mut x1, dc) = self.base.closed_form_step(&self.base_state(z), u, t)?;
        x1.push(c + dc);
        // Lifted incremental cost is zero; the accumulated cost rides in the
        // appended coordinate.
        Some((x1, 0.0))
    }

    fn segment_feasible(&self, a: &StateVector, b: &StateVector) -> Option<bool> {
        self.base.segment_feasible(&self.base_state(a), &self.base_state(b))
    }

    fn steer_toward(
        &self,
        from: &StateVector,
        target: &StateVector,
        rng: &mut dyn RngCore,
    ) -> Option<(ControlVector, f64)> {
        self.base
            .steer_toward(&self.base_state(from), &self.base_state(target), rng)
    }

    fn heuristic(&self, z: &StateVector) -> f64 {
        self.base.heuristic(&self.base_state(z))
    }

    fn goal_bounds(&self) -> Option<BoxBounds> {
        Some(self.base.goal_bounds()?.extended(0.0, f64::INFINITY))
    }

    fn default_metric(&self) -> Metric {
        self.base.default_metric().extended(0.0)
    }
}

/// The goal set bounded by an incumbent cost: states in the base goal whose
/// cost-to-come leaves room for the terminal cost under `cbar`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostBoundedGoal {
    cbar: f64,
}

impl CostBoundedGoal {
    /// `cbar` may be `+inf` (the unbounded first iteration).
    pub fn new(cbar: f64) -> Result<Self> {
        if cbar <= 0.0 || cbar.is_nan() {
            return Err(crate::error::Error::InvalidParameter(format!(
                "cost bound must be positive, got {cbar}"
            )));
        }
        Ok(Self { cbar })
    }

    pub fn unbounded() -> Self {
        Self { cbar: f64::INFINITY }
    }

    pub fn cbar(&self) -> f64 {
        self.cbar
    }

    pub fn is_bounded(&self) -> bool {
        self.cbar.is_finite()
    }
}

/// Membership in G_c̄ = {(x, c) | x ∈ G, c ∈ [0, c̄ − Φ(x)]}.
pub fn goal_contains<S: ControlSystem + ?Sized>(
    goal: &CostBoundedGoal,
    base: &S,
    z: &AugmentedState,
) -> bool {
    let x = z.state_vector();
    base.in_goal(&x) && z.cost() <= goal.cbar - base.terminal_cost(&x)
}

/// Heuristic pruning predicate: drop a node when its cost-to-come plus an
/// admissible cost-to-go bound exceeds the incumbent. Equality is retained;
/// the goal's cost interval is closed and ties carry no measure.
pub fn should_prune<H>(z: &AugmentedState, cbar: f64, heuristic: H) -> bool
where
    H: Fn(&StateVector) -> f64,
{
    z.cost() + heuristic(&z.state_vector()) > cbar
}
