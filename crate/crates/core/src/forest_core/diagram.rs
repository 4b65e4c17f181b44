use std::fmt;

use super::labels::{GapLabel, WeightTable};
use super::tree::BinaryTree;
use super::word::{Generator, Word};
use crate::error::{Error, Result};
use crate::tree_codec::encode_tree;

/// A finite window of a binary forest with one pointed tree.
///
/// Trees are stored as one concatenated preorder shape string (`1` caret, `0` leaf),
/// which keeps the per-generator edits to a single insertion or deletion.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Forest {
    shape: Vec<u8>,
    pointer: usize,
}

impl Forest {
    /// `leaves` trivial trees, pointing at tree `pointer`.
    pub fn trivial(leaves: usize, pointer: usize) -> Result<Self> {
        if pointer >= leaves {
            return Err(Error::Parse(format!("pointer {pointer} outside {leaves} trees")));
        }
        Ok(Forest { shape: vec![0; leaves], pointer })
    }

    pub fn from_trees(trees: &[BinaryTree], pointer: usize) -> Result<Self> {
        if pointer >= trees.len() {
            return Err(Error::Parse(format!("pointer {pointer} outside {} trees", trees.len())));
        }
        let mut shape = Vec::new();
        for t in trees {
            t.write_preorder(&mut shape);
        }
        Ok(Forest { shape, pointer })
    }

    pub fn trees(&self) -> Vec<BinaryTree> {
        let mut out = Vec::new();
        let mut pos = 0;
        while pos < self.shape.len() {
            let (t, used) = BinaryTree::read_preorder(&self.shape[pos..]);
            out.push(t);
            pos += used;
        }
        out
    }

    pub fn pointer(&self) -> usize {
        self.pointer
    }

    pub fn leaf_count(&self) -> usize {
        self.shape.iter().filter(|&&s| s == 0).count()
    }

    pub fn caret_count(&self) -> usize {
        self.shape.len() - self.leaf_count()
    }

    pub fn tree_count(&self) -> usize {
        self.tree_bounds().0
    }

    /// Number of trees and the shape position where the last one begins.
    fn tree_bounds(&self) -> (usize, usize) {
        let mut count = 0;
        let mut last = 0;
        let mut need = 0usize;
        for (k, &s) in self.shape.iter().enumerate() {
            if need == 0 {
                count += 1;
                last = k;
                need = 1;
            }
            if s == 1 {
                need += 1;
            } else {
                need -= 1;
            }
        }
        (count, last)
    }

    /// Shape position of the tree with index `k`, if it exists.
    fn tree_start(&self, k: usize) -> Option<usize> {
        let mut need = 0usize;
        let mut idx = 0usize;
        for (pos, &s) in self.shape.iter().enumerate() {
            if need == 0 {
                if idx == k {
                    return Some(pos);
                }
                idx += 1;
                need = 1;
            }
            if s == 1 {
                need += 1;
            } else {
                need -= 1;
            }
        }
        None
    }

    /// Leaf index of the first leaf at or after shape position `pos`.
    fn leaf_index_at(&self, pos: usize) -> usize {
        self.shape[..pos].iter().filter(|&&s| s == 0).count()
    }

    /// Leaf indices `j`, ascending, such that a caret has exactly leaves `j` and
    /// `j + 1` as children.
    fn exposed_carets(&self) -> impl Iterator<Item = usize> + '_ {
        let mut leaves = 0;
        self.shape.iter().enumerate().filter_map(move |(k, &s)| {
            if s == 0 {
                leaves += 1;
                None
            } else if self.shape.get(k + 1) == Some(&0) && self.shape.get(k + 2) == Some(&0) {
                Some(leaves)
            } else {
                None
            }
        })
    }

    /// Replaces the exposed caret over leaves `j, j + 1` by a single leaf.
    fn collapse_caret(&mut self, j: usize) {
        let mut leaves = 0;
        for k in 0..self.shape.len() {
            if self.shape[k] == 0 {
                leaves += 1;
            } else if leaves == j && self.shape[k + 1] == 0 && self.shape[k + 2] == 0 {
                self.shape.drain(k..k + 2);
                return;
            }
        }
        unreachable!("no exposed caret at leaf {j}");
    }

    /// Replaces leaf `j` by a caret with two leaves.
    fn expand_leaf(&mut self, j: usize) {
        let mut leaves = 0;
        for k in 0..self.shape.len() {
            if self.shape[k] == 0 {
                if leaves == j {
                    self.shape.splice(k..k + 1, [1, 0, 0]);
                    return;
                }
                leaves += 1;
            }
        }
        unreachable!("no leaf {j}");
    }

    /// Gap labels of this forest, one per pair of adjacent leaves.
    pub fn gap_labels(&self) -> Vec<GapLabel> {
        self.gap_label_iter().collect()
    }

    /// Single left-to-right pass; each label depends only on the leaf right of the
    /// gap, the symbol before it, and whether its tree is past the pointer.
    pub fn gap_label_iter(&self) -> GapLabels<'_> {
        GapLabels {
            shape: &self.shape,
            pointer: self.pointer,
            pos: 0,
            need: 0,
            tree: 0,
            tree_start: 0,
            first_leaf: true,
            seen_leaf: false,
            prev: 0,
        }
    }

    fn key_into(&self, tag: u8, out: &mut Vec<u8>) {
        out.push(tag);
        out.extend_from_slice(self.pointer.to_string().as_bytes());
        for t in self.trees() {
            let word = encode_tree(&t).to_string();
            out.extend_from_slice(word.len().to_string().as_bytes());
            out.push(b':');
            out.extend_from_slice(word.as_bytes());
        }
    }
}

/// Iterator over the gap labels of a forest.
pub struct GapLabels<'a> {
    shape: &'a [u8],
    pointer: usize,
    pos: usize,
    need: usize,
    tree: usize,
    tree_start: usize,
    first_leaf: bool,
    seen_leaf: bool,
    prev: u8,
}

impl Iterator for GapLabels<'_> {
    type Item = GapLabel;

    fn next(&mut self) -> Option<GapLabel> {
        while self.pos < self.shape.len() {
            let pos = self.pos;
            let s = self.shape[pos];
            self.pos += 1;
            if self.need == 0 {
                if pos > 0 {
                    self.tree += 1;
                }
                self.tree_start = pos;
                self.first_leaf = true;
                self.need = 1;
            }
            let prev = self.prev;
            self.prev = s;
            if s == 1 {
                self.need += 1;
                continue;
            }
            self.need -= 1;
            let first_leaf = std::mem::replace(&mut self.first_leaf, false);
            if !std::mem::replace(&mut self.seen_leaf, true) {
                continue;
            }
            let label = if !first_leaf {
                if prev == 1 {
                    GapLabel::N
                } else {
                    GapLabel::I
                }
            } else if self.tree <= self.pointer {
                GapLabel::L
            } else if pos != self.tree_start {
                GapLabel::X
            } else {
                GapLabel::R
            };
            return Some(label);
        }
        None
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let trees = self.trees();
        f.write_str("[")?;
        for (k, t) in trees.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if k == self.pointer {
                f.write_str("*")?;
            }
            write!(f, "{t:?}")?;
        }
        f.write_str("]")
    }
}

/// A pair of forests whose leaves are matched left to right, each with a pointer.
///
/// Values produced by [`identity`](Self::identity) and [`multiply`](Self::multiply)
/// are always reduced: no common carets and no removable empty column at either end.
/// A reduced diagram is the unique representative of its group element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ForestDiagram {
    top: Forest,
    bottom: Forest,
}

impl ForestDiagram {
    pub fn identity() -> Self {
        ForestDiagram { top: Forest { shape: vec![0], pointer: 0 }, bottom: Forest { shape: vec![0], pointer: 0 } }
    }

    /// Pairs two forests. The result need not be reduced.
    pub fn from_forests(top: Forest, bottom: Forest) -> Result<Self> {
        if top.leaf_count() != bottom.leaf_count() {
            return Err(Error::Parse(format!(
                "top has {} leaves, bottom has {}",
                top.leaf_count(),
                bottom.leaf_count()
            )));
        }
        Ok(ForestDiagram { top, bottom })
    }

    /// The diagram of a generator.
    pub fn generator(g: Generator) -> Self {
        Self::identity().multiply(g)
    }

    /// Folds `multiply` over a word.
    pub fn from_word(word: &Word) -> Self {
        word.letters().iter().fold(Self::identity(), |d, &g| d.multiply(g))
    }

    pub fn top(&self) -> &Forest {
        &self.top
    }

    pub fn bottom(&self) -> &Forest {
        &self.bottom
    }

    /// Number of gap columns (leaves minus one).
    pub fn column_count(&self) -> usize {
        self.top.leaf_count() - 1
    }

    /// The diagram with top and bottom exchanged: the inverse element.
    pub fn swapped(&self) -> Self {
        ForestDiagram { top: self.bottom.clone(), bottom: self.top.clone() }
    }

    /// Right multiplication by a generator.
    ///
    /// `x0` moves the top pointer one tree right (`x0⁻¹` left), growing the window
    /// with a trivial column when it runs off an end. `x1` joins the pointed tree
    /// and its right neighbour under a new caret. `x1⁻¹` removes the root caret of
    /// a nontrivial pointed tree, leaving the pointer on its left half; on a trivial
    /// pointed tree it splits that leaf in two and adds a caret below it in the
    /// bottom forest instead.
    pub fn multiply(&self, g: Generator) -> Self {
        let mut d = self.clone();
        match g {
            Generator::X0 => {
                d.top.pointer += 1;
                if d.top.tree_start(d.top.pointer).is_none() {
                    d.pad_right();
                }
            }
            Generator::X0Inv => {
                if d.top.pointer == 0 {
                    d.pad_left();
                    d.top.pointer = 0;
                } else {
                    d.top.pointer -= 1;
                }
            }
            Generator::X1 => {
                let p = d.top.pointer;
                if d.top.tree_start(p + 1).is_none() {
                    d.pad_right();
                }
                let start = d.top.tree_start(p).expect("pointed tree exists");
                d.top.shape.insert(start, 1);
            }
            Generator::X1Inv => {
                let start = d.top.tree_start(d.top.pointer).expect("pointed tree exists");
                if d.top.shape[start] == 1 {
                    d.top.shape.remove(start);
                } else {
                    let leaf = d.top.leaf_index_at(start);
                    d.top.shape.insert(start, 0);
                    d.bottom.expand_leaf(leaf);
                }
            }
        }
        d.cancel_common_carets();
        d.trim();
        d
    }

    fn pad_right(&mut self) {
        self.top.shape.push(0);
        self.bottom.shape.push(0);
    }

    fn pad_left(&mut self) {
        self.top.shape.insert(0, 0);
        self.bottom.shape.insert(0, 0);
        self.top.pointer += 1;
        self.bottom.pointer += 1;
    }

    /// Leaf indices of common caret pairs.
    pub fn common_carets(&self) -> Vec<usize> {
        self.common_caret_iter().collect()
    }

    fn common_caret_iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut bottom = self.bottom.exposed_carets().peekable();
        self.top.exposed_carets().filter(move |&j| {
            while bottom.next_if(|&b| b < j).is_some() {}
            bottom.peek() == Some(&j)
        })
    }

    fn cancel_common_carets(&mut self) {
        loop {
            let Some(j) = self.common_caret_iter().next() else {
                break;
            };
            self.top.collapse_caret(j);
            self.bottom.collapse_caret(j);
        }
    }

    fn trim(&mut self) {
        while self.top.shape.len() > 1
            && self.bottom.shape.len() > 1
            && self.top.pointer > 0
            && self.bottom.pointer > 0
            && self.top.shape[0] == 0
            && self.bottom.shape[0] == 0
        {
            self.top.shape.remove(0);
            self.bottom.shape.remove(0);
            self.top.pointer -= 1;
            self.bottom.pointer -= 1;
        }
        loop {
            if self.top.shape.last() != Some(&0) || self.bottom.shape.last() != Some(&0) {
                break;
            }
            let (top_trees, top_last) = self.top.tree_bounds();
            let (bottom_trees, bottom_last) = self.bottom.tree_bounds();
            let removable = top_trees > 1
                && top_last == self.top.shape.len() - 1
                && bottom_last == self.bottom.shape.len() - 1
                && self.top.pointer + 1 < top_trees
                && self.bottom.pointer + 1 < bottom_trees;
            if !removable {
                break;
            }
            self.top.shape.pop();
            self.bottom.shape.pop();
        }
    }

    /// Cancels every common caret pair and strips empty boundary columns.
    /// Idempotent; the identity on diagrams already reduced.
    pub fn reduce(&self) -> Self {
        let mut d = self.clone();
        d.cancel_common_carets();
        d.trim();
        d
    }

    pub fn is_reduced(&self) -> bool {
        *self == self.reduce()
    }

    /// One (top, bottom) label pair per gap column.
    pub fn label_gaps(&self) -> Vec<(GapLabel, GapLabel)> {
        self.top.gap_labels().into_iter().zip(self.bottom.gap_labels()).collect()
    }

    /// Per-column weights under the standard table.
    pub fn column_weights(&self) -> Vec<u32> {
        let table = WeightTable::standard();
        self.label_gaps().into_iter().map(|(t, b)| table.get(t, b)).collect()
    }

    /// Sum of column weights: the geodesic length of the element.
    pub fn weight(&self) -> u32 {
        self.weight_with(&WeightTable::standard())
    }

    pub fn weight_with(&self, table: &WeightTable) -> u32 {
        self.top.gap_label_iter().zip(self.bottom.gap_label_iter()).map(|(t, b)| table.get(t, b)).sum()
    }

    /// Deterministic, injective serialization of a reduced diagram: for each forest a
    /// tag byte, the decimal pointer index, then each tree's code word prefixed by
    /// its decimal length and `:`.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 * self.top.shape.len() + 8);
        self.top.key_into(b'T', &mut out);
        self.bottom.key_into(b'B', &mut out);
        out
    }
}

impl fmt::Debug for ForestDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} / {:?}", self.top, self.bottom)
    }
}

/// Geodesic length of the element a word represents.
pub fn geodesic_length(word: &Word) -> u32 {
    ForestDiagram::from_word(word).weight()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest_core::GapLabel::*;
    use Generator::*;

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn leaf() -> BinaryTree {
        BinaryTree::Leaf
    }

    fn caret() -> BinaryTree {
        BinaryTree::caret(leaf(), leaf())
    }

    #[test]
    fn identity_has_weight_zero() {
        let e = ForestDiagram::identity();
        assert_eq!(e.weight(), 0);
        assert_eq!(e.column_count(), 0);
        assert!(e.label_gaps().is_empty());
        assert_eq!(e.canonical_key(), b"T00:B00:".to_vec());
        assert!(e.is_reduced());
    }

    #[test]
    fn generators_have_length_one() {
        for g in Generator::ALL {
            let d = ForestDiagram::generator(g);
            assert_eq!(d.weight(), 1, "{g}");
            assert_eq!(d.column_count(), 1, "{g}");
        }
        assert_eq!(ForestDiagram::generator(X0).label_gaps(), vec![(L, R)]);
        assert_eq!(ForestDiagram::generator(X0Inv).label_gaps(), vec![(R, L)]);
        assert_eq!(ForestDiagram::generator(X1).label_gaps(), vec![(I, R)]);
        assert_eq!(ForestDiagram::generator(X1Inv).label_gaps(), vec![(R, I)]);
    }

    #[test]
    fn generator_keys_are_distinct() {
        let keys: std::collections::HashSet<_> =
            Generator::ALL.iter().map(|&g| ForestDiagram::generator(g).canonical_key()).collect();
        assert_eq!(keys.len(), 4);
        assert!(!keys.contains(&ForestDiagram::identity().canonical_key()));
    }

    #[test]
    fn cancellation() {
        let e = ForestDiagram::identity();
        for w in ["aA", "Aa", "bB", "Bb", "aaAA", "abBA", "bbBB", "BBbb", "abAB"] {
            let d = ForestDiagram::from_word(&word(w));
            if w == "abAB" {
                assert_ne!(d, e);
            } else {
                assert_eq!(d, e, "{w}");
                assert_eq!(d.canonical_key(), e.canonical_key());
            }
        }
    }

    #[test]
    fn x1_then_inverse_on_trivial_tree() {
        // x1⁻¹ on a trivial pointed tree adds a bottom caret, x1 then cancels it.
        let d = ForestDiagram::identity().multiply(X1Inv);
        assert_eq!(d.bottom().caret_count(), 1);
        assert_eq!(d.top().caret_count(), 0);
        assert_eq!(d.multiply(X1), ForestDiagram::identity());
    }

    #[test]
    fn reduce_cancels_common_caret_and_is_idempotent() {
        let top = Forest::from_trees(&[leaf(), caret(), leaf()], 0).unwrap();
        let bottom = Forest::from_trees(&[leaf(), caret(), leaf()], 0).unwrap();
        let d = ForestDiagram::from_forests(top, bottom).unwrap();
        assert_eq!(d.common_carets(), vec![1]);
        assert!(!d.is_reduced());
        let r = d.reduce();
        assert!(r.common_carets().is_empty());
        assert_eq!(r, ForestDiagram::identity());
        assert_eq!(r.reduce(), r);
    }

    #[test]
    fn padded_identity_reduces() {
        let d = ForestDiagram::from_forests(Forest::trivial(4, 2).unwrap(), Forest::trivial(4, 2).unwrap()).unwrap();
        assert_eq!(d.label_gaps(), vec![(L, L), (L, L), (R, R)]);
        assert_eq!(d.reduce(), ForestDiagram::identity());
    }

    #[test]
    fn mismatched_leaf_counts_rejected() {
        let r = ForestDiagram::from_forests(Forest::trivial(2, 0).unwrap(), Forest::trivial(3, 0).unwrap());
        assert!(r.is_err());
        assert!(Forest::trivial(2, 2).is_err());
    }

    #[test]
    fn labels_follow_rules() {
        // top: . *((. .) .) (. .) .   bottom: trivial, pointer at 0
        let big = BinaryTree::caret(caret(), leaf());
        let top = Forest::from_trees(&[leaf(), big, caret(), leaf()], 1).unwrap();
        let labels = top.gap_labels();
        // leaves: 0 | 1 2 3 | 4 5 | 6
        assert_eq!(labels, vec![L, I, I, X, I, R]);
        let top = Forest::from_trees(&[leaf(), BinaryTree::caret(leaf(), caret())], 1).unwrap();
        assert_eq!(top.gap_labels(), vec![L, N, I]);
    }

    #[test]
    fn swapped_has_same_weight() {
        for w in ["abAB", "bbaB", "BaBab", "aaBBbA"] {
            let d = ForestDiagram::from_word(&word(w));
            assert_eq!(d.weight(), d.swapped().weight(), "{w}");
            assert_eq!(d.swapped(), ForestDiagram::from_word(&word(w).inverse()));
        }
    }

    #[test]
    fn geodesic_lengths() {
        assert_eq!(geodesic_length(&Word::new()), 0);
        assert_eq!(geodesic_length(&word("aA")), 0);
        assert_eq!(geodesic_length(&word("ab")), 2);
        assert_eq!(geodesic_length(&word("aaaa")), 4);
    }
}
