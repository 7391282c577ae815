//! Vector states and controls, box bounds, distance metrics, and unit scaling.
//!
//! Metrics are plain data so that benchmark configurations can sweep metric
//! weights (e.g. the cost-axis weight) without touching planner code. Angular
//! axes wrap: differences are taken as the shortest angular distance.

use std::f64::consts::TAU;
use std::ops::Index;

use rand::Rng;

use crate::error::{Error, Result};

/// A point in an n-dimensional real state space.
///
/// Angles are in radians, positions in problem units (meters, pixels, ...).
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    coords: Vec<f64>,
}

impl StateVector {
    pub fn new(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()), "non-finite state");
        Self { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { coords: vec![0.0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    /// Appends one coordinate, e.g. the cost axis of a lifted state.
    pub fn push(&mut self, value: f64) {
        self.coords.push(value);
    }

    /// The first `n` coordinates as a new vector.
    pub fn truncated(&self, n: usize) -> StateVector {
        StateVector::new(self.coords[..n].to_vec())
    }
}

impl From<Vec<f64>> for StateVector {
    fn from(coords: Vec<f64>) -> Self {
        Self::new(coords)
    }
}

impl From<&[f64]> for StateVector {
    fn from(coords: &[f64]) -> Self {
        Self::new(coords.to_vec())
    }
}

impl Index<usize> for StateVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

/// A control input u ∈ U.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlVector {
    coords: Vec<f64>,
}

impl ControlVector {
    pub fn new(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()), "non-finite control");
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

impl From<Vec<f64>> for ControlVector {
    fn from(coords: Vec<f64>) -> Self {
        Self::new(coords)
    }
}

impl Index<usize> for ControlVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

/// Axis-aligned box bounds. `hi` may be `+inf` on axes that are clipped
/// before sampling (the cost axis of a lifted space).
#[derive(Clone, Debug, PartialEq)]
pub struct BoxBounds {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BoxBounds {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), actual: hi.len() });
        }
        for (axis, (&l, &h)) in lo.iter().zip(&hi).enumerate() {
            if !l.is_finite() || h.is_nan() || h == f64::NEG_INFINITY {
                return Err(Error::InfiniteBound { axis });
            }
            if l > h {
                return Err(Error::InvalidParameter(format!(
                    "lo[{axis}] = {l} exceeds hi[{axis}] = {h}"
                )));
            }
        }
        Ok(Self { lo, hi })
    }

    /// The unit hypercube [0,1]^dim.
    pub fn unit(dim: usize) -> Self {
        Self { lo: vec![0.0; dim], hi: vec![1.0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn contains(&self, x: &StateVector) -> bool {
        x.dim() == self.dim()
            && x.coords()
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(&c, (&l, &h))| c >= l && c <= h)
    }

    /// Appends one axis, returning the extended box.
    pub fn extended(&self, lo: f64, hi: f64) -> Self {
        let mut lo_v = self.lo.clone();
        let mut hi_v = self.hi.clone();
        lo_v.push(lo);
        hi_v.push(hi);
        Self { lo: lo_v, hi: hi_v }
    }

    /// Uniform sample; every bound must be finite.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<StateVector> {
        let mut coords = Vec::with_capacity(self.dim());
        for (axis, (&l, &h)) in self.lo.iter().zip(&self.hi).enumerate() {
            if !h.is_finite() {
                return Err(Error::InfiniteBound { axis });
            }
            coords.push(if l == h { l } else { rng.gen_range(l..=h) });
        }
        Ok(StateVector::new(coords))
    }

    /// Affine map of each coordinate to [0,1]. Zero-width axes map to 0.5.
    pub fn scale_to_unit(&self, x: &StateVector) -> Result<StateVector> {
        self.check_dim(x)?;
        let coords = x
            .coords()
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .enumerate()
            .map(|(axis, (&c, (&l, &h)))| {
                if !h.is_finite() {
                    return Err(Error::InfiniteBound { axis });
                }
                Ok(if h > l { (c - l) / (h - l) } else { 0.5 })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StateVector::new(coords))
    }

    /// Inverse of [`scale_to_unit`](Self::scale_to_unit).
    pub fn unscale_from_unit(&self, x: &StateVector) -> Result<StateVector> {
        self.check_dim(x)?;
        let coords = x
            .coords()
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&c, (&l, &h))| if h > l { l + c * (h - l) } else { l })
            .collect();
        Ok(StateVector::new(coords))
    }

    fn check_dim(&self, x: &StateVector) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: x.dim() });
        }
        Ok(())
    }
}

/// Shortest angular difference between two angles under the given period.
/// Symmetric bit-for-bit: the reduction happens on |a − b|.
pub fn angular_difference(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).abs().rem_euclid(period);
    d.min(period - d)
}

/// Metric kind; weighted metrics may mark axes as angular.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricKind {
    Euclidean,
    WeightedWithAngles,
}

/// A weighted Euclidean metric with optional angular (wrapping) axes.
///
/// d(a, b) = sqrt(sum_i w_i * delta_i^2) where delta_i is the plain
/// difference on linear axes and the shortest angular difference on angular
/// axes. Weights multiply squared differences, so the Dubins metric's
/// "divide the squared angle term by 2π" is `weight = 1/(2π)` on that axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    kind: MetricKind,
    weights: Vec<f64>,
    /// `Some(period)` marks an angular axis.
    angular: Vec<Option<f64>>,
}

impl Metric {
    pub fn euclidean(dim: usize) -> Self {
        Self { kind: MetricKind::Euclidean, weights: vec![1.0; dim], angular: vec![None; dim] }
    }

    pub fn weighted(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidParameter("metric weights must be ≥ 0 and finite".into()));
        }
        let dim = weights.len();
        Ok(Self { kind: MetricKind::WeightedWithAngles, weights, angular: vec![None; dim] })
    }

    /// Marks `axis` angular with the given wrap period (2π for plain angles).
    pub fn with_angular_axis(mut self, axis: usize, period: f64) -> Self {
        assert!(axis < self.angular.len(), "angular axis out of range");
        assert!(period > 0.0, "angular period must be positive");
        self.kind = MetricKind::WeightedWithAngles;
        self.angular[axis] = Some(period);
        self
    }

    /// Convenience: 2π-periodic angular axis.
    pub fn with_angle(self, axis: usize) -> Self {
        self.with_angular_axis(axis, TAU)
    }

    /// Appends an axis with the given weight (the cost axis of a lifted space).
    pub fn extended(&self, weight: f64) -> Self {
        let mut m = self.clone();
        m.weights.push(weight);
        m.angular.push(None);
        if weight != 1.0 {
            m.kind = MetricKind::WeightedWithAngles;
        }
        m
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_angular(&self, axis: usize) -> bool {
        self.angular[axis].is_some()
    }

    /// Weighted squared difference contributed by one axis.
    pub fn axis_term(&self, axis: usize, a: f64, b: f64) -> f64 {
        let d = match self.angular[axis] {
            Some(period) => angular_difference(a, b, period),
            None => a - b,
        };
        self.weights[axis] * d * d
    }

    pub fn distance(&self, a: &StateVector, b: &StateVector) -> Result<f64> {
        if a.dim() != self.dim() || b.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: if a.dim() != self.dim() { a.dim() } else { b.dim() },
            });
        }
        Ok(self.distance_unchecked(a.coords(), b.coords()))
    }

    /// Distance without the dimension check, for hot index loops.
    pub fn distance_unchecked(&self, a: &[f64], b: &[f64]) -> f64 {
        self.distance_squared_unchecked(a, b).sqrt()
    }

    pub fn distance_squared_unchecked(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.weights.len() {
            sum += self.axis_term(i, a[i], b[i]);
        }
        sum
    }
}

/// Distance between two states under a metric.
pub fn metric_distance(metric: &Metric, a: &StateVector, b: &StateVector) -> Result<f64> {
    metric.distance(a, b)
}

/// Uniform sample from finite box bounds.
pub fn sample_uniform<R: Rng + ?Sized>(bounds: &BoxBounds, rng: &mut R) -> Result<StateVector> {
    bounds.sample_uniform(rng)
}

/// Affine map into the unit cube.
pub fn scale_to_unit(x: &StateVector, bounds: &BoxBounds) -> Result<StateVector> {
    bounds.scale_to_unit(x)
}
