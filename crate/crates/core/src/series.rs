use std::fmt;

use num_bigint::BigUint;

/// What a series counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// Group elements of each length, f(n).
    Elements,
    /// Geodesic words of each length, g(n).
    Geodesics,
}

/// Which procedure produced a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesSource {
    AlgorithmA,
    AlgorithmB,
    BfsOracle,
    File,
}

impl fmt::Display for SeriesSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesSource::AlgorithmA => "geodesic traversal",
            SeriesSource::AlgorithmB => "column transfer",
            SeriesSource::BfsOracle => "breadth-first oracle",
            SeriesSource::File => "file",
        })
    }
}

/// Coefficients `values[n]` for `n = 0, 1, ...` with provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthSeries {
    pub values: Vec<BigUint>,
    pub kind: SeriesKind,
    pub source: SeriesSource,
}

impl GrowthSeries {
    pub fn new(values: Vec<BigUint>, kind: SeriesKind, source: SeriesSource) -> Self {
        GrowthSeries { values, kind, source }
    }

    pub fn from_u64(values: &[u64], kind: SeriesKind, source: SeriesSource) -> Self {
        Self::new(values.iter().map(|&v| BigUint::from(v)).collect(), kind, source)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.values.get(n)
    }
}
