//! Shortening and lengthening generator sets `d-(w)` and `d+(w)`.
//!
//! Every relator of F has even length, so no generator preserves length: each of
//! the four generators either shortens or lengthens a given element.

use std::fmt;

use crate::forest_core::{ForestDiagram, Generator, Word};

/// A subset of the four generators.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GeneratorSet(u8);

impl GeneratorSet {
    pub const EMPTY: GeneratorSet = GeneratorSet(0);
    pub const ALL: GeneratorSet = GeneratorSet(0b1111);

    pub fn insert(&mut self, g: Generator) {
        self.0 |= 1 << g.index();
    }

    pub fn contains(self, g: Generator) -> bool {
        self.0 & (1 << g.index()) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in the default generator order.
    pub fn iter(self) -> impl Iterator<Item = Generator> {
        Generator::ALL.into_iter().filter(move |&g| self.contains(g))
    }

    pub fn union(self, other: GeneratorSet) -> GeneratorSet {
        GeneratorSet(self.0 | other.0)
    }

    pub fn intersection(self, other: GeneratorSet) -> GeneratorSet {
        GeneratorSet(self.0 & other.0)
    }
}

impl FromIterator<Generator> for GeneratorSet {
    fn from_iter<T: IntoIterator<Item = Generator>>(iter: T) -> Self {
        let mut s = GeneratorSet::EMPTY;
        for g in iter {
            s.insert(g);
        }
        s
    }
}

impl fmt::Debug for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for g in self.iter() {
            write!(f, "{g}")?;
        }
        f.write_str("}")
    }
}

/// `down` shortens, `up` lengthens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorPartition {
    pub down: GeneratorSet,
    pub up: GeneratorSet,
}

impl GeneratorPartition {
    /// True when every generator is classified and none twice.
    pub fn is_total(&self) -> bool {
        self.down.intersection(self.up).is_empty() && self.down.union(self.up) == GeneratorSet::ALL
    }
}

/// Classification of one element together with the four products, which callers
/// walking the Cayley graph can reuse.
#[derive(Debug, Clone)]
pub struct Neighbourhood {
    pub partition: GeneratorPartition,
    pub products: [ForestDiagram; 4],
    pub lengths: [u32; 4],
}

/// Multiplies by each generator and compares lengths against `len`.
pub fn neighbourhood(d: &ForestDiagram, len: u32) -> Neighbourhood {
    let products = Generator::ALL.map(|g| d.multiply(g));
    let lengths = [0, 1, 2, 3].map(|k| products[k].weight());
    let mut partition = GeneratorPartition { down: GeneratorSet::EMPTY, up: GeneratorSet::EMPTY };
    for g in Generator::ALL {
        let l = lengths[g.index()];
        if l + 1 == len {
            partition.down.insert(g);
        } else if l == len + 1 {
            partition.up.insert(g);
        }
    }
    Neighbourhood { partition, products, lengths }
}

/// Partition for a reduced diagram whose weight is `len`.
pub fn classify_incremental(d: &ForestDiagram, len: u32) -> GeneratorPartition {
    neighbourhood(d, len).partition
}

/// Partition for an arbitrary word. Rebuilds the diagram from the identity.
pub fn classify(w: &Word) -> GeneratorPartition {
    let d = ForestDiagram::from_word(w);
    let len = d.weight();
    classify_incremental(&d, len)
}
