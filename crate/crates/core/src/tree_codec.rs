//! Leaf/internal-node code words for binary trees.
//!
//! Reading a tree in order (skipping its left-most leaf) and writing `n`/`i` for
//! internal nodes that are a left child (or the root) / a right child, and `N`/`I`
//! for leaves that are a left / right child, gives a word over `{n, N, i, I}`. The
//! words that arise are exactly those that start with `n`, end with `I`, alternate
//! case, and keep `#n + #N >= #i + #I` on every prefix with equality at the end.
//!
//! The upper-case letters are the gap labels used inside trees of a forest diagram,
//! and the excess (half the surplus of opening over closing letters) is the
//! "distance from completion" coordinate tracked by the column-transfer enumeration.
//!
//! The trivial (single-leaf) tree encodes as the empty word.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{CodecViolation, Error, Result};
use crate::forest_core::BinaryTree;

/// One letter of a code word.
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeLetter {
    /// Internal node that is the root or a left child.
    n,
    /// Leaf that is a left child.
    N,
    /// Internal node that is a right child.
    i,
    /// Leaf that is a right child.
    I,
}

impl CodeLetter {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'n' => Some(CodeLetter::n),
            'N' => Some(CodeLetter::N),
            'i' => Some(CodeLetter::i),
            'I' => Some(CodeLetter::I),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            CodeLetter::n => 'n',
            CodeLetter::N => 'N',
            CodeLetter::i => 'i',
            CodeLetter::I => 'I',
        }
    }

    pub fn is_upper(self) -> bool {
        matches!(self, CodeLetter::N | CodeLetter::I)
    }

    /// `n` and `N` open, `i` and `I` close.
    fn opens(self) -> bool {
        matches!(self, CodeLetter::n | CodeLetter::N)
    }
}

/// A word over `{n, N, i, I}`. Not necessarily admissible.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CodeWord(Vec<CodeLetter>);

impl CodeWord {
    pub fn new(letters: Vec<CodeLetter>) -> Self {
        CodeWord(letters)
    }

    pub fn letters(&self) -> &[CodeLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Half the length.
    pub fn size(&self) -> usize {
        self.0.len() / 2
    }
}

impl fmt::Display for CodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for CodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CodeWord({self})")
    }
}

impl FromStr for CodeWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                CodeLetter::from_char(c)
                    .ok_or_else(|| Error::Codec { word: s.to_string(), reason: CodecViolation::Alphabet })
            })
            .collect::<Result<Vec<_>>>()
            .map(CodeWord)
    }
}

/// Encodes a tree. The single-leaf tree maps to the empty word.
pub fn encode_tree(tree: &BinaryTree) -> CodeWord {
    fn walk(t: &BinaryTree, right: bool, first_leaf: &mut bool, out: &mut Vec<CodeLetter>) {
        match t {
            BinaryTree::Leaf => {
                if *first_leaf {
                    *first_leaf = false;
                } else {
                    out.push(if right { CodeLetter::I } else { CodeLetter::N });
                }
            }
            BinaryTree::Caret(l, r) => {
                walk(l, false, first_leaf, out);
                out.push(if right { CodeLetter::i } else { CodeLetter::n });
                walk(r, true, first_leaf, out);
            }
        }
    }
    let mut out = Vec::with_capacity(2 * tree.caret_count());
    walk(tree, false, &mut true, &mut out);
    CodeWord(out)
}

/// Checks the admissibility conditions in order and reports the first one violated.
/// The empty word is accepted (trivial tree).
pub fn check_admissible(word: &CodeWord) -> std::result::Result<(), CodecViolation> {
    let w = word.letters();
    if w.is_empty() {
        return Ok(());
    }
    if w[0] != CodeLetter::n {
        return Err(CodecViolation::Start);
    }
    if *w.last().unwrap() != CodeLetter::I {
        return Err(CodecViolation::End);
    }
    if w.iter().enumerate().any(|(k, l)| l.is_upper() != (k % 2 == 1)) {
        return Err(CodecViolation::Alternation);
    }
    let mut balance = 0i64;
    for l in w {
        balance += if l.opens() { 1 } else { -1 };
        if balance < 0 {
            return Err(CodecViolation::NegativePrefix);
        }
    }
    if balance != 0 {
        return Err(CodecViolation::Incomplete);
    }
    Ok(())
}

/// Decodes an admissible complete word back to its tree.
pub fn decode_word(word: &CodeWord) -> Result<BinaryTree> {
    check_admissible(word).map_err(|reason| Error::Codec { word: word.to_string(), reason })?;

    // Items carry whether they sit as a right child (`I`) or a left child (`N`).
    // The left-most leaf is an implicit left child. Adjacent `N a I` contracts to
    // a caret whose own position is the upper case of `a`.
    enum Entry {
        Item(BinaryTree, bool),
        Op(bool),
    }
    let mut stack = vec![Entry::Item(BinaryTree::Leaf, false)];
    for pair in word.letters().chunks(2) {
        stack.push(Entry::Op(pair[0] == CodeLetter::i));
        stack.push(Entry::Item(BinaryTree::Leaf, pair[1] == CodeLetter::I));
        while stack.len() >= 3 {
            let k = stack.len();
            let reducible = matches!((&stack[k - 3], &stack[k - 1]), (Entry::Item(_, false), Entry::Item(_, true)));
            if !reducible {
                break;
            }
            let Some(Entry::Item(right, _)) = stack.pop() else { unreachable!() };
            let Some(Entry::Op(as_right)) = stack.pop() else { unreachable!() };
            let Some(Entry::Item(left, _)) = stack.pop() else { unreachable!() };
            stack.push(Entry::Item(BinaryTree::caret(left, right), as_right));
        }
    }
    match (stack.pop(), stack.is_empty()) {
        (Some(Entry::Item(tree, false)), true) => Ok(tree),
        _ => Err(Error::Codec { word: word.to_string(), reason: CodecViolation::Incomplete }),
    }
}

/// Excess of an even-length, case-alternating word starting lower-case:
/// `(#N + #n - #I - #i) / 2`. Fails if any prefix goes negative.
pub fn excess_of(word: &CodeWord) -> Result<usize> {
    let w = word.letters();
    let err = |reason| Error::Codec { word: word.to_string(), reason };
    if w.iter().enumerate().any(|(k, l)| l.is_upper() != (k % 2 == 1)) {
        return Err(err(CodecViolation::Alternation));
    }
    if !w.len().is_multiple_of(2) {
        return Err(err(CodecViolation::Alternation));
    }
    let mut balance = 0i64;
    for l in w {
        balance += if l.opens() { 1 } else { -1 };
        if balance < 0 {
            return Err(err(CodecViolation::NegativePrefix));
        }
    }
    Ok((balance / 2) as usize)
}

/// The upper-case subsequence of a word: the interior gap labels of the tree.
pub fn upper_case_view(word: &CodeWord) -> Vec<CodeLetter> {
    word.letters().iter().copied().filter(|l| l.is_upper()).collect()
}

/// Forward iteration of the excess recurrence, seeded with `c(1, 0) = 1`.
///
/// Each step distributes the counts of the current size over the next one:
/// excess 0 extends by `nN` (to 1) and `nI` (stays 0); positive excess `h`
/// extends by `nN` (h + 1), `nI` and `iN` (h), `iI` (h - 1). Only the current
/// size level is held in memory.
#[derive(Debug, Clone)]
pub struct TreeCounter {
    size: usize,
    level: Vec<BigUint>,
}

impl TreeCounter {
    pub fn new() -> Self {
        TreeCounter { size: 0, level: Vec::new() }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Counts at the current size, indexed by excess.
    pub fn level(&self) -> &[BigUint] {
        &self.level
    }

    fn step(&mut self) {
        if self.size == 0 {
            self.level = vec![BigUint::one()];
            self.size = 1;
            return;
        }
        let mut next = vec![BigUint::zero(); self.level.len() + 1];
        for (h, c) in self.level.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            next[h + 1] += c;
            if h == 0 {
                next[0] += c;
            } else {
                next[h] += c << 1u32;
                next[h - 1] += c;
            }
        }
        while next.len() > 1 && next.last().is_some_and(Zero::is_zero) {
            next.pop();
        }
        self.level = next;
        self.size += 1;
    }
}

impl Default for TreeCounter {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for TreeCounter {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        self.step();
        Some(self.level[0].clone())
    }
}

/// `c(l, 0)` for `l = 1..=max_size`.
pub fn count_trees(max_size: usize) -> Vec<BigUint> {
    TreeCounter::new().take(max_size).collect()
}
