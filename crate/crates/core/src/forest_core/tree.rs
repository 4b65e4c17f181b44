use std::fmt;

/// A finite rooted binary tree. Every internal node (caret) has exactly two children.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum BinaryTree {
    Leaf,
    Caret(Box<BinaryTree>, Box<BinaryTree>),
}

impl BinaryTree {
    pub fn caret(left: BinaryTree, right: BinaryTree) -> Self {
        BinaryTree::Caret(Box::new(left), Box::new(right))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, BinaryTree::Leaf)
    }

    pub fn caret_count(&self) -> usize {
        match self {
            BinaryTree::Leaf => 0,
            BinaryTree::Caret(l, r) => 1 + l.caret_count() + r.caret_count(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.caret_count() + 1
    }

    /// All binary trees with exactly `carets` carets, in a fixed order.
    pub fn enumerate(carets: usize) -> Vec<BinaryTree> {
        let mut by_size: Vec<Vec<BinaryTree>> = vec![vec![BinaryTree::Leaf]];
        for k in 1..=carets {
            let mut trees = Vec::new();
            for left in 0..k {
                let right = k - 1 - left;
                for l in &by_size[left] {
                    for r in &by_size[right] {
                        trees.push(BinaryTree::caret(l.clone(), r.clone()));
                    }
                }
            }
            by_size.push(trees);
        }
        by_size.swap_remove(carets)
    }

    /// Preorder shape: `1` for a caret, `0` for a leaf.
    pub(crate) fn write_preorder(&self, out: &mut Vec<u8>) {
        match self {
            BinaryTree::Leaf => out.push(0),
            BinaryTree::Caret(l, r) => {
                out.push(1);
                l.write_preorder(out);
                r.write_preorder(out);
            }
        }
    }

    /// Inverse of [`write_preorder`](Self::write_preorder). Returns the tree and the
    /// number of symbols consumed. The slice must begin with a complete tree.
    pub(crate) fn read_preorder(code: &[u8]) -> (BinaryTree, usize) {
        match code[0] {
            0 => (BinaryTree::Leaf, 1),
            _ => {
                let (l, a) = Self::read_preorder(&code[1..]);
                let (r, b) = Self::read_preorder(&code[1 + a..]);
                (BinaryTree::caret(l, r), 1 + a + b)
            }
        }
    }
}

impl fmt::Debug for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinaryTree::Leaf => f.write_str("."),
            BinaryTree::Caret(l, r) => write!(f, "({l:?} {r:?})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_counts_are_catalan() {
        let counts: Vec<usize> = (0..=7).map(|k| BinaryTree::enumerate(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42, 132, 429]);
    }

    #[test]
    fn carets_and_leaves() {
        for k in 0..=5 {
            for t in BinaryTree::enumerate(k) {
                assert_eq!(t.caret_count(), k);
                assert_eq!(t.leaf_count(), k + 1);
            }
        }
    }

    #[test]
    fn preorder_round_trip() {
        for k in 0..=6 {
            for t in BinaryTree::enumerate(k) {
                let mut code = Vec::new();
                t.write_preorder(&mut code);
                assert_eq!(code.len(), 2 * k + 1);
                let (back, used) = BinaryTree::read_preorder(&code);
                assert_eq!(used, code.len());
                assert_eq!(back, t);
            }
        }
    }
}
