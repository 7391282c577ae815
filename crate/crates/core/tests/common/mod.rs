//! Shared helpers for the integration suites: a discrete grid world with a
//! complete product-graph planner and Dijkstra oracle, the state-cost
//! equivalence checker, and linear-scan index oracles.

#![allow(dead_code)]

use std::collections::{BinaryHeap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use aox_core::meta::CompleteOutcome;
use aox_core::space::{Metric, StateVector};
use aox_core::statecost::lift;
use aox_core::system::{check_segment_feasible, propagate, trajectory_cost, ControlSystem, Trajectory};

/// A 4-connected grid with integer edge costs entering each cell, used as a
/// fully discrete test bed where completeness is attainable.
#[derive(Clone, Debug)]
pub struct GridWorld {
    pub n: usize,
    pub blocked: Vec<bool>,
    /// Cost of stepping *into* each cell (1..=9).
    pub enter_cost: Vec<u32>,
    pub start: usize,
    pub goal: usize,
}

impl GridWorld {
    /// Random feasible instance on an n×n grid.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let mut blocked = vec![false; n * n];
            for b in blocked.iter_mut() {
                *b = rng.gen_bool(0.2);
            }
            let enter_cost: Vec<u32> = (0..n * n).map(|_| rng.gen_range(1..=9)).collect();
            let start = 0;
            let goal = n * n - 1;
            let mut world = Self { n, blocked, enter_cost, start, goal };
            world.blocked[start] = false;
            world.blocked[goal] = false;
            if world.dijkstra().is_some() {
                return world;
            }
        }
    }

    /// Instance whose goal is sealed off by a full wall.
    pub fn walled(n: usize, seed: u64) -> Self {
        let mut world = Self::random(n, seed);
        let wall_col = n - 2;
        for row in 0..n {
            world.blocked[row * n + wall_col] = true;
        }
        world.blocked[world.start] = false;
        world
    }

    fn neighbors(&self, cell: usize) -> Vec<usize> {
        let (i, j) = (cell % self.n, cell / self.n);
        let mut out = Vec::with_capacity(4);
        if i + 1 < self.n {
            out.push(cell + 1);
        }
        if i > 0 {
            out.push(cell - 1);
        }
        if j + 1 < self.n {
            out.push(cell + self.n);
        }
        if j > 0 {
            out.push(cell - self.n);
        }
        out.retain(|&c| !self.blocked[c]);
        out
    }

    /// Optimal path cost (oracle).
    pub fn dijkstra(&self) -> Option<u32> {
        let mut dist = vec![u32::MAX; self.n * self.n];
        let mut heap = BinaryHeap::new();
        dist[self.start] = 0;
        heap.push(std::cmp::Reverse((0u32, self.start)));
        while let Some(std::cmp::Reverse((d, cell))) = heap.pop() {
            if d > dist[cell] {
                continue;
            }
            if cell == self.goal {
                return Some(d);
            }
            for nb in self.neighbors(cell) {
                let nd = d + self.enter_cost[nb];
                if nd < dist[nb] {
                    dist[nb] = nd;
                    heap.push(std::cmp::Reverse((nd, nb)));
                }
            }
        }
        None
    }

    /// Complete feasible planner: BFS over the (cell, accumulated-cost)
    /// product graph, returning the first path found with cost within the
    /// bound, or `NoSolution` after exhausting the finite product graph.
    pub fn complete_bfs_plan(&self, cbar: f64) -> CompleteOutcome<Vec<usize>> {
        let cap: u32 = if cbar.is_infinite() {
            self.enter_cost.iter().sum()
        } else if cbar < 0.0 {
            return CompleteOutcome::NoSolution;
        } else {
            cbar.floor() as u32
        };
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        queue.push_back((self.start, 0u32, vec![self.start]));
        seen.insert((self.start, 0u32));
        while let Some((cell, cost, path)) = queue.pop_front() {
            if cell == self.goal {
                return CompleteOutcome::Solution { payload: path, cost: cost as f64 };
            }
            for nb in self.neighbors(cell) {
                let ncost = cost + self.enter_cost[nb];
                if ncost <= cap && seen.insert((nb, ncost)) {
                    let mut npath = path.clone();
                    npath.push(nb);
                    queue.push_back((nb, ncost, npath));
                }
            }
        }
        CompleteOutcome::NoSolution
    }
}

/// Drives random control sequences through the lifted system and checks
/// that (a) the appended cost coordinate equals the base cost functional of
/// the projected trajectory, to `tol_rel`, and (b) lifted and base
/// feasibility agree along the way.
pub fn check_state_cost_equivalence<S: ControlSystem>(
    base: &S,
    sequences: usize,
    max_segments: usize,
    seed: u64,
    tol_rel: f64,
) {
    let lifted = lift(base);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..sequences {
        let mut z = lifted.start().clone();
        let mut traj = Trajectory::new(base.start().clone());
        let segments = 1 + (s % max_segments);
        for _ in 0..segments {
            let (u, duration) = lifted.sample_control(&z, &mut rng);
            let prop = match propagate(&lifted, &z, &u, duration) {
                Ok(p) => p,
                Err(_) => break,
            };
            // Lifted and base feasibility must agree on the projection.
            let base_states: Vec<StateVector> = prop
                .states
                .iter()
                .map(|zz| zz.truncated(base.dim_state()))
                .collect();
            assert_eq!(
                check_segment_feasible(&lifted, &prop.states),
                check_segment_feasible(base, &base_states),
                "lifted/base feasibility disagree"
            );
            z = prop.end().clone();
            traj.push(u, duration, z.truncated(base.dim_state()));
        }
        if traj.is_empty() {
            continue;
        }
        let lifted_cost = z[base.dim_state()];
        let functional = trajectory_cost(base, &traj).unwrap() - base.terminal_cost(traj.end());
        let scale = lifted_cost.abs().max(1.0);
        assert!(
            (lifted_cost - functional).abs() / scale <= tol_rel,
            "cost mismatch: lifted {lifted_cost} vs functional {functional}"
        );
        // The cost coordinate never decreases along the lifted trajectory.
        assert!(lifted_cost >= -1e-12);
    }
}

/// Linear-scan nearest neighbor for KD-tree validation.
pub fn brute_nearest(metric: &Metric, points: &[(usize, StateVector)], q: &StateVector) -> f64 {
    points
        .iter()
        .map(|(_, p)| metric.distance(p, q).unwrap())
        .fold(f64::INFINITY, f64::min)
}

/// All benchmark metrics over their lifted spaces, with the cost-axis
/// weights the cost-weight study sweeps.
pub fn benchmark_metrics() -> Vec<(String, Metric, Vec<(f64, f64)>)> {
    use std::f64::consts::TAU;
    let mut out = Vec::new();
    let cost_weights = [0.0, 0.1, 0.3, 1.0, 3.0, 10.0];
    // (name, state metric, per-axis sampling ranges)
    let planar = Metric::euclidean(2);
    let dubins = Metric::weighted(vec![1.0, 1.0, 1.0 / TAU]).unwrap().with_angle(2);
    let di = Metric::euclidean(4);
    let pendulum = Metric::weighted(vec![1.0, 1.0]).unwrap().with_angle(0);
    let flappy = Metric::euclidean(3);
    let specs: [(&str, Metric, Vec<(f64, f64)>); 5] = [
        ("planar", planar, vec![(0.0, 1.0), (0.0, 1.0)]),
        ("dubins", dubins, vec![(0.0, 1.0), (0.0, 1.0), (-TAU, TAU)]),
        ("double-integrator", di, vec![(0.0, 1.0), (0.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)]),
        ("pendulum", pendulum, vec![(0.0, TAU), (-8.0, 8.0)]),
        ("flappy", flappy, vec![(0.0, 1000.0), (0.0, 600.0), (-40.0, 40.0)]),
    ];
    for (name, metric, ranges) in specs {
        for &w_c in &cost_weights {
            let mut r = ranges.clone();
            r.push((0.0, 10.0));
            out.push((format!("{name}+wc{w_c}"), metric.clone().extended(w_c), r));
        }
    }
    out
}

pub fn random_point_in(rng: &mut ChaCha8Rng, ranges: &[(f64, f64)]) -> StateVector {
    StateVector::new(ranges.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect())
}

/// Fuzzes interleaved inserts, removals, and nearest queries against a
/// linear scan. Returns the number of mismatches (must be zero).
pub fn kd_fuzz(metric: &Metric, ranges: &[(f64, f64)], operations: usize, seed: u64) -> usize {
    use aox_core::nn::KdTree;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tree = KdTree::new(metric.clone());
    let mut reference: Vec<(usize, StateVector)> = Vec::new();
    let mut next_id = 0usize;
    let mut mismatches = 0usize;
    for _ in 0..operations {
        match rng.gen_range(0..10) {
            // Mostly inserts and queries, occasional deletions.
            0..=4 => {
                let p = random_point_in(&mut rng, ranges);
                tree.insert(next_id, p.clone());
                reference.push((next_id, p));
                next_id += 1;
            }
            5 if !reference.is_empty() => {
                let idx = rng.gen_range(0..reference.len());
                let (id, _) = reference.swap_remove(idx);
                assert!(tree.remove(id));
            }
            _ => {
                let q = random_point_in(&mut rng, ranges);
                match (tree.nearest(&q), reference.is_empty()) {
                    (Err(_), true) => {}
                    (Err(_), false) | (Ok(_), true) => mismatches += 1,
                    (Ok((_, d)), false) => {
                        let best = brute_nearest(metric, &reference, &q);
                        if (d - best).abs() > 0.0 {
                            mismatches += 1;
                        }
                    }
                }
            }
        }
    }
    mismatches
}

/// Fuzzes density-grid inserts, removals, counts, and source sampling
/// against a brute-force recount. Returns the number of count mismatches.
pub fn density_fuzz(
    state_ranges: &[(f64, f64)],
    cost_divisor: f64,
    operations: usize,
    seed: u64,
) -> usize {
    use aox_core::nn::DensityGrid;
    use aox_core::space::BoxBounds;
    let h = 0.1;
    let bounds = BoxBounds::new(
        state_ranges.iter().map(|r| r.0).collect(),
        state_ranges.iter().map(|r| r.1).collect(),
    )
    .unwrap();
    let mut grid = DensityGrid::new(&bounds, cost_divisor, h, 3).unwrap();
    let dim = state_ranges.len() + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reference: Vec<(usize, StateVector)> = Vec::new();
    let mut next_id = 0usize;
    let mut mismatches = 0usize;

    // Scaled cell coordinates exactly as the grid hashes them.
    let scaled = |z: &StateVector, axis: usize| -> f64 {
        if axis < state_ranges.len() {
            let (lo, hi) = state_ranges[axis];
            (z[axis] - lo) / (hi - lo)
        } else {
            z[axis] / cost_divisor
        }
    };
    let cell = |z: &StateVector, axis: usize| (scaled(z, axis) / h).floor() as i64;

    let mut full_ranges = state_ranges.to_vec();
    full_ranges.push((0.0, cost_divisor * 1.5));

    for _ in 0..operations {
        match rng.gen_range(0..10) {
            0..=4 => {
                let z = random_point_in(&mut rng, &full_ranges);
                grid.insert(next_id, &z);
                reference.push((next_id, z));
                next_id += 1;
            }
            5 if !reference.is_empty() => {
                let idx = rng.gen_range(0..reference.len());
                let (id, z) = reference.swap_remove(idx);
                assert!(grid.remove(id, &z));
            }
            _ => {
                let q = random_point_in(&mut rng, &full_ranges);
                // Brute-force recount over all axis triples.
                let mut brute = 0usize;
                let axes: Vec<usize> = (0..dim).collect();
                for i in 0..dim {
                    for j in (i + 1)..dim {
                        for k in (j + 1)..dim {
                            let proj = [axes[i], axes[j], axes[k]];
                            brute += reference
                                .iter()
                                .filter(|(_, p)| {
                                    proj.iter().all(|&a| cell(p, a) == cell(&q, a))
                                })
                                .count();
                        }
                    }
                }
                if grid.count(&q) != brute {
                    mismatches += 1;
                }
            }
        }
    }
    mismatches
}
