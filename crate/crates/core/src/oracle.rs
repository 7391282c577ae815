//! Grid-Dijkstra reference optima for the planar benchmarks.
//!
//! The planar shortest-path problems have no analytic optimum, so the
//! harness and tests compare planner output against Dijkstra on a dense
//! 8-connected grid over the obstacle layout. Grid paths are themselves
//! feasible polylines, so the grid value upper-bounds the true optimum; the
//! octile metric distortion bounds it from below (see
//! [`certified_lower_bound`]).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::problems::RectObstacleWorld;

/// Maximum factor by which an 8-connected grid path can exceed the
/// continuous shortest path: sqrt(1 + (√2 − 1)²).
pub const OCTILE_OVERESTIMATE: f64 = 1.082_392_200_292_393_9;

#[derive(Copy, Clone, PartialEq)]
struct QueueEntry {
    dist: f64,
    cell: u32,
}

impl Eq for QueueEntry {}

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on distance.
        other.dist.total_cmp(&self.dist)
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest feasible path length from the world's start to its goal region
/// on a `resolution`² grid of cell centers, 8-connected, with diagonal
/// moves forbidden from cutting blocked corners. `None` when the goal is
/// unreachable at this resolution.
pub fn grid_shortest_path(world: &RectObstacleWorld, resolution: usize) -> Option<f64> {
    assert!(resolution >= 2);
    let n = resolution;
    let (dx, dy) = (world.domain.w / n as f64, world.domain.h / n as f64);
    let center = |i: usize, j: usize| {
        (
            world.domain.x + (i as f64 + 0.5) * dx,
            world.domain.y + (j as f64 + 0.5) * dy,
        )
    };

    let mut free = vec![false; n * n];
    for j in 0..n {
        for i in 0..n {
            let (px, py) = center(i, j);
            free[j * n + i] = world.point_free(px, py);
        }
    }

    let cell_of = |px: f64, py: f64| {
        let i = (((px - world.domain.x) / dx) as isize).clamp(0, n as isize - 1) as usize;
        let j = (((py - world.domain.y) / dy) as isize).clamp(0, n as isize - 1) as usize;
        j * n + i
    };
    let start = cell_of(world.start[0], world.start[1]);
    if !free[start] {
        return None;
    }

    let mut goal = vec![false; n * n];
    let mut any_goal = false;
    for j in 0..n {
        for i in 0..n {
            let (px, py) = center(i, j);
            if free[j * n + i] && world.in_goal(px, py) {
                goal[j * n + i] = true;
                any_goal = true;
            }
        }
    }
    if !any_goal {
        return None;
    }

    let diagonal = (dx * dx + dy * dy).sqrt();
    let mut dist = vec![f64::INFINITY; n * n];
    let mut heap = BinaryHeap::new();
    dist[start] = 0.0;
    heap.push(QueueEntry { dist: 0.0, cell: start as u32 });

    while let Some(QueueEntry { dist: d, cell }) = heap.pop() {
        let cell = cell as usize;
        if d > dist[cell] {
            continue;
        }
        if goal[cell] {
            return Some(d);
        }
        let (ci, cj) = ((cell % n) as isize, (cell / n) as isize);
        let is_free = |ni: isize, nj: isize| {
            ni >= 0
                && nj >= 0
                && ni < n as isize
                && nj < n as isize
                && free[nj as usize * n + ni as usize]
        };
        let relax = |ni: isize, nj: isize, w: f64, dist: &mut Vec<f64>, heap: &mut BinaryHeap<QueueEntry>| {
            if !is_free(ni, nj) {
                return;
            }
            let nc = nj as usize * n + ni as usize;
            let nd = d + w;
            if nd < dist[nc] {
                dist[nc] = nd;
                heap.push(QueueEntry { dist: nd, cell: nc as u32 });
            }
        };
        relax(ci + 1, cj, dx, &mut dist, &mut heap);
        relax(ci - 1, cj, dx, &mut dist, &mut heap);
        relax(ci, cj + 1, dy, &mut dist, &mut heap);
        relax(ci, cj - 1, dy, &mut dist, &mut heap);
        // Diagonals may not cut corners: both orthogonal neighbors must be free.
        for (di, dj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            if is_free(ci + di, cj) && is_free(ci, cj + dj) {
                relax(ci + di, cj + dj, diagonal, &mut dist, &mut heap);
            }
        }
    }
    None
}

/// A sound lower bound on the continuous optimum derived from the grid
/// value: the octile distortion factor plus a few cells of endpoint and
/// clearance quantization.
pub fn certified_lower_bound(grid_value: f64, world: &RectObstacleWorld, resolution: usize) -> f64 {
    let h = (world.domain.w / resolution as f64).max(world.domain.h / resolution as f64);
    grid_value / OCTILE_OVERESTIMATE - 4.0 * h
}
