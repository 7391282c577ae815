//! Multi-grid density estimation over low-dimensional projections of the
//! scaled state-cost space.
//!
//! One grid of resolution `h` per size-`k` subset of the coordinate axes
//! (all C(dim, k) of them). A node's density is the total occupancy of the
//! cells it falls into across all grids. Source selection picks an occupied
//! (grid, cell) pair uniformly, then a node uniformly within that cell.
//!
//! State axes are scaled into [0,1] by the problem bounds before hashing;
//! the cost axis is divided by the current cost bound (or the first
//! solution's cost) supplied as `cost_divisor`.

use std::collections::HashMap;

use itertools::Itertools;
use rand::Rng;

use crate::error::{Error, Result};
use crate::space::{BoxBounds, StateVector};

type CellKey = (u32, [i64; 3]);

/// Occupancy grids over axis-subset projections of the lifted space.
#[derive(Clone, Debug)]
pub struct DensityGrid {
    dim: usize,
    resolution: f64,
    projections: Vec<[usize; 3]>,
    lo: Vec<f64>,
    inv_width: Vec<f64>,
    cells: HashMap<CellKey, Vec<usize>>,
    occupied: Vec<CellKey>,
    occupied_pos: HashMap<CellKey, usize>,
    len: usize,
}

impl DensityGrid {
    /// `state_bounds` covers the base state axes; one extra cost axis is
    /// appended and scaled by `cost_divisor`.
    pub fn new(
        state_bounds: &BoxBounds,
        cost_divisor: f64,
        resolution: f64,
        k: usize,
    ) -> Result<Self> {
        if !(resolution > 0.0) {
            return Err(Error::InvalidParameter("grid resolution must be positive".into()));
        }
        if !(cost_divisor > 0.0) || !cost_divisor.is_finite() {
            return Err(Error::InvalidParameter("cost divisor must be positive and finite".into()));
        }
        let dim = state_bounds.dim() + 1;
        if k != 3 || dim < k {
            return Err(Error::InvalidParameter(format!(
                "projection dimension {k} unsupported for lifted dimension {dim}"
            )));
        }
        let mut lo = state_bounds.lo().to_vec();
        let mut inv_width = Vec::with_capacity(dim);
        for (axis, (&l, &h)) in state_bounds.lo().iter().zip(state_bounds.hi()).enumerate() {
            if !h.is_finite() {
                return Err(Error::InfiniteBound { axis });
            }
            // Zero-width axes collapse to the cell at 0.5, matching unit scaling.
            inv_width.push(if h > l { 1.0 / (h - l) } else { 0.0 });
        }
        lo.push(0.0);
        inv_width.push(1.0 / cost_divisor);
        let projections = (0..dim)
            .combinations(k)
            .map(|c| [c[0], c[1], c[2]])
            .collect::<Vec<_>>();
        Ok(Self {
            dim,
            resolution,
            projections,
            lo,
            inv_width,
            cells: HashMap::new(),
            occupied: Vec::new(),
            occupied_pos: HashMap::new(),
            len: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn num_projections(&self) -> usize {
        self.projections.len()
    }

    fn scaled(&self, axis: usize, value: f64) -> f64 {
        if self.inv_width[axis] == 0.0 {
            0.5
        } else {
            (value - self.lo[axis]) * self.inv_width[axis]
        }
    }

    fn cell_of(&self, proj_idx: usize, z: &[f64]) -> CellKey {
        let proj = &self.projections[proj_idx];
        let mut key = [0i64; 3];
        for (slot, &axis) in proj.iter().enumerate() {
            key[slot] = (self.scaled(axis, z[axis]) / self.resolution).floor() as i64;
        }
        (proj_idx as u32, key)
    }

    pub fn insert(&mut self, id: usize, z: &StateVector) {
        debug_assert_eq!(z.dim(), self.dim);
        for p in 0..self.projections.len() {
            let key = self.cell_of(p, z.coords());
            let cell = self.cells.entry(key).or_default();
            if cell.is_empty() {
                self.occupied_pos.insert(key, self.occupied.len());
                self.occupied.push(key);
            }
            cell.push(id);
        }
        self.len += 1;
    }

    /// Removes a node given the same coordinates it was inserted with.
    pub fn remove(&mut self, id: usize, z: &StateVector) -> bool {
        debug_assert_eq!(z.dim(), self.dim);
        let mut found = false;
        for p in 0..self.projections.len() {
            let key = self.cell_of(p, z.coords());
            if let Some(cell) = self.cells.get_mut(&key) {
                if let Some(pos) = cell.iter().position(|&x| x == id) {
                    cell.swap_remove(pos);
                    found = true;
                    if cell.is_empty() {
                        self.cells.remove(&key);
                        let pos = self.occupied_pos.remove(&key).expect("occupied entry");
                        let last = self.occupied.len() - 1;
                        self.occupied.swap(pos, last);
                        self.occupied.pop();
                        if pos < self.occupied.len() {
                            self.occupied_pos.insert(self.occupied[pos], pos);
                        }
                    }
                }
            }
        }
        if found {
            self.len -= 1;
        }
        found
    }

    /// Total number of nodes sharing a cell with `z`, summed over all grids.
    pub fn count(&self, z: &StateVector) -> usize {
        debug_assert_eq!(z.dim(), self.dim);
        (0..self.projections.len())
            .map(|p| {
                self.cells
                    .get(&self.cell_of(p, z.coords()))
                    .map_or(0, |cell| cell.len())
            })
            .sum()
    }

    /// Picks an occupied (grid, cell) pair uniformly at random, then a node
    /// uniformly within that cell.
    pub fn sample_source<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        if self.occupied.is_empty() {
            return Err(Error::EmptyIndex);
        }
        let key = self.occupied[rng.gen_range(0..self.occupied.len())];
        let cell = &self.cells[&key];
        Ok(cell[rng.gen_range(0..cell.len())])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid_2plus1() -> DensityGrid {
        DensityGrid::new(&BoxBounds::unit(2), 1.0, 0.1, 3).unwrap()
    }

    fn aug(x: f64, y: f64, c: f64) -> StateVector {
        StateVector::new(vec![x, y, c])
    }

    #[test]
    fn projection_count_is_binomial() {
        // dim(X)+1 = 3 choose 3 → 1 grid; 4 choose 3 → 4; 5 choose 3 → 10.
        assert_eq!(grid_2plus1().num_projections(), 1);
        let g4 = DensityGrid::new(&BoxBounds::unit(3), 1.0, 0.1, 3).unwrap();
        assert_eq!(g4.num_projections(), 4);
        let g5 = DensityGrid::new(&BoxBounds::unit(4), 1.0, 0.1, 3).unwrap();
        assert_eq!(g5.num_projections(), 10);
    }

    #[test]
    fn empty_grid_counts_zero_and_errors_on_sample() {
        let g = grid_2plus1();
        assert_eq!(g.count(&aug(0.5, 0.5, 0.0)), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(g.sample_source(&mut rng).is_err());
    }

    #[test]
    fn one_node_counts_once_per_projection() {
        let mut g = DensityGrid::new(&BoxBounds::unit(3), 1.0, 0.1, 3).unwrap();
        let z = StateVector::new(vec![0.25, 0.5, 0.75, 0.3]);
        g.insert(0, &z);
        assert_eq!(g.count(&z), g.num_projections());
    }

    #[test]
    fn counts_match_brute_force_recount() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut g = grid_2plus1();
        let mut pts = Vec::new();
        for id in 0..500 {
            let z = aug(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            g.insert(id, &z);
            pts.push(z);
        }
        let cell = |v: f64| (v / 0.1).floor() as i64;
        for q in pts.iter().take(100) {
            let brute = pts
                .iter()
                .filter(|p| {
                    cell(p[0]) == cell(q[0]) && cell(p[1]) == cell(q[1]) && cell(p[2]) == cell(q[2])
                })
                .count();
            assert_eq!(g.count(q), brute);
        }
    }

    #[test]
    fn source_sampling_is_uniform_over_cells() {
        // Two occupied cells with 1 and 99 nodes must each be picked ~50%.
        let mut g = grid_2plus1();
        g.insert(0, &aug(0.05, 0.05, 0.05));
        for id in 1..100 {
            g.insert(id, &aug(0.95, 0.95, 0.95));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let n = 10_000;
        let mut lone = 0;
        for _ in 0..n {
            if g.sample_source(&mut rng).unwrap() == 0 {
                lone += 1;
            }
        }
        // ±3σ binomial band around p = 0.5.
        let sigma = (0.25f64 / n as f64).sqrt();
        let p = lone as f64 / n as f64;
        assert!((p - 0.5).abs() < 3.0 * sigma, "cell-uniformity violated: {p}");
    }

    #[test]
    fn removed_cells_are_never_sampled() {
        let mut g = grid_2plus1();
        let a = aug(0.05, 0.05, 0.05);
        g.insert(0, &a);
        for id in 1..4 {
            g.insert(id, &aug(0.95, 0.95, 0.95));
        }
        assert!(g.remove(0, &a));
        assert_eq!(g.count(&a), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            assert_ne!(g.sample_source(&mut rng).unwrap(), 0);
        }
    }

    #[test]
    fn deletion_keeps_counts_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut g = grid_2plus1();
        let mut pts = Vec::new();
        for id in 0..300 {
            let z = aug(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            g.insert(id, &z);
            pts.push((id, z));
        }
        let mut survivors = Vec::new();
        for (id, z) in pts {
            if rng.gen_bool(0.5) {
                assert!(g.remove(id, &z));
            } else {
                survivors.push(z);
            }
        }
        let cell = |v: f64| (v / 0.1).floor() as i64;
        for q in survivors.iter().take(50) {
            let brute = survivors
                .iter()
                .filter(|p| {
                    cell(p[0]) == cell(q[0]) && cell(p[1]) == cell(q[1]) && cell(p[2]) == cell(q[2])
                })
                .count();
            assert_eq!(g.count(q), brute);
        }
    }

    #[test]
    fn cost_axis_scaling_uses_divisor() {
        // With divisor 10, costs 0.4 and 0.6 land in the same h=0.1 cell
        // only after scaling (0.04 vs 0.06).
        let mut g = DensityGrid::new(&BoxBounds::unit(2), 10.0, 0.1, 3).unwrap();
        g.insert(0, &aug(0.05, 0.05, 0.4));
        assert_eq!(g.count(&aug(0.05, 0.05, 0.6)), 1);
        let mut g1 = DensityGrid::new(&BoxBounds::unit(2), 1.0, 0.1, 3).unwrap();
        g1.insert(0, &aug(0.05, 0.05, 0.4));
        assert_eq!(g1.count(&aug(0.05, 0.05, 0.6)), 0);
    }
}
