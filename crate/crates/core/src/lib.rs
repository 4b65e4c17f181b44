//! Exact enumeration of the spherical growth series f(n) and the geodesic growth
//! series g(n) of Thompson's group F with generators x0, x1 and their inverses.
//!
//! Two independent counting engines are provided:
//!
//! * [`algorithm_a`] walks every geodesic word in lexicographic order and weights
//!   each by the reciprocal product of its shortening-generator counts; the weights
//!   of the geodesics ending at one element sum to exactly one. Exponential time,
//!   linear space; also yields g(n).
//! * [`algorithm_b`] builds forest diagrams column by column, tracking only the
//!   labels and tree excess of the last column on each side, in `O(n^3)` time and
//!   `O(n^2)` space.
//!
//! Both are checked against a brute-force breadth-first oracle in [`forest_core`].
//! [`series_analysis`] turns the resulting integers into certified growth-rate
//! bounds.

pub mod algorithm_a;
pub mod algorithm_b;
pub mod error;
pub mod forest_core;
pub mod geodesic_classifier;
pub mod series;
pub mod series_analysis;
pub mod tree_codec;

pub use error::{Error, Result};
pub use forest_core::{ForestDiagram, GapLabel, Generator, Word};
pub use series::{GrowthSeries, SeriesKind, SeriesSource};
