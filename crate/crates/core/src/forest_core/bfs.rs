use std::collections::HashSet;

use super::diagram::ForestDiagram;
use super::word::{Generator, Word};
use crate::error::{Error, Result};
use crate::series::{GrowthSeries, SeriesKind, SeriesSource};

/// Default cap on the number of stored elements.
pub const DEFAULT_ELEMENT_BUDGET: usize = 10_000_000;

/// Largest radius the oracle accepts by default.
pub const DEFAULT_ORACLE_RADIUS: usize = 10;

/// One element reached by the search, with the word that first reached it.
#[derive(Debug, Clone)]
pub struct BallElement {
    pub diagram: ForestDiagram,
    pub witness: Word,
}

/// The ball of radius `spheres.len() - 1`, sphere by sphere.
#[derive(Debug, Clone)]
pub struct Ball {
    pub spheres: Vec<Vec<BallElement>>,
}

impl Ball {
    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.spheres.iter().map(Vec::len).collect()
    }
}

/// Breadth-first search of the Cayley graph from the identity, deduplicating
/// elements by canonical key.
pub fn bfs_ball(radius: usize, element_budget: usize) -> Result<Ball> {
    let identity = ForestDiagram::identity();
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    seen.insert(identity.canonical_key());
    let mut spheres = vec![vec![BallElement { diagram: identity, witness: Word::new() }]];
    for _ in 0..radius {
        let mut next = Vec::new();
        for e in spheres.last().unwrap() {
            for g in Generator::ALL {
                let d = e.diagram.multiply(g);
                if seen.insert(d.canonical_key()) {
                    if seen.len() > element_budget {
                        return Err(Error::ResourceLimit(format!(
                            "breadth-first ball exceeds {element_budget} elements"
                        )));
                    }
                    let mut witness = e.witness.clone();
                    witness.push(g);
                    next.push(BallElement { diagram: d, witness });
                }
            }
        }
        spheres.push(next);
    }
    Ok(Ball { spheres })
}

/// `|S(0)|, ..., |S(n_max)|` by brute-force search.
pub fn bfs_sphere_counts(n_max: usize) -> Result<GrowthSeries> {
    bfs_sphere_counts_with_budget(n_max, DEFAULT_ELEMENT_BUDGET)
}

pub fn bfs_sphere_counts_with_budget(n_max: usize, element_budget: usize) -> Result<GrowthSeries> {
    let ball = bfs_ball(n_max, element_budget)?;
    let sizes: Vec<u64> = ball.sphere_sizes().into_iter().map(|s| s as u64).collect();
    Ok(GrowthSeries::from_u64(&sizes, SeriesKind::Elements, SeriesSource::BfsOracle))
}
