//! Forest diagrams: the canonical representatives of elements of F.
//!
//! A diagram is a top and a bottom forest whose leaves are matched left to right.
//! Gaps between adjacent leaves form columns; labelling each side of a column and
//! summing the table weights of the label pairs gives the word length.

mod bfs;
mod diagram;
mod labels;
mod tree;
mod word;

pub use bfs::{
    bfs_ball, bfs_sphere_counts, bfs_sphere_counts_with_budget, Ball, BallElement, DEFAULT_ELEMENT_BUDGET,
    DEFAULT_ORACLE_RADIUS,
};
pub use diagram::{geodesic_length, Forest, ForestDiagram};
pub use labels::{column_weight, GapLabel, WeightTable};
pub use tree::BinaryTree;
pub use word::{Generator, Word};
