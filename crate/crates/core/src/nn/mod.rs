//! Proximity structures backing the planners: an exact KD-tree for RRT
//! nearest-neighbor queries and a multi-grid low-dimensional-projection
//! density estimator for EST.

mod density;
mod kdtree;

pub use density::DensityGrid;
pub use kdtree::KdTree;
