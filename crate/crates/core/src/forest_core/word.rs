use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One of the four standard generators of F and their inverses.
///
/// The derived order `X0 < X0Inv < X1 < X1Inv` is the lexicographic order used to
/// traverse geodesic words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    X0,
    X0Inv,
    X1,
    X1Inv,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::X0, Generator::X0Inv, Generator::X1, Generator::X1Inv];

    pub fn inverse(self) -> Self {
        match self {
            Generator::X0 => Generator::X0Inv,
            Generator::X0Inv => Generator::X0,
            Generator::X1 => Generator::X1Inv,
            Generator::X1Inv => Generator::X1,
        }
    }

    /// Position in the default order, usable as an array index.
    pub fn index(self) -> usize {
        self as usize
    }

    /// Compact letter: `a` = x0, `A` = x0⁻¹, `b` = x1, `B` = x1⁻¹.
    pub fn letter(self) -> char {
        match self {
            Generator::X0 => 'a',
            Generator::X0Inv => 'A',
            Generator::X1 => 'b',
            Generator::X1Inv => 'B',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'a' => Some(Generator::X0),
            'A' => Some(Generator::X0Inv),
            'b' => Some(Generator::X1),
            'B' => Some(Generator::X1Inv),
            _ => None,
        }
    }

    fn from_verbose(tok: &str) -> Option<Self> {
        match tok {
            "x0" => Some(Generator::X0),
            "x0^-1" => Some(Generator::X0Inv),
            "x1" => Some(Generator::X1),
            "x1^-1" => Some(Generator::X1Inv),
            _ => None,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A word in the generators, read left to right as successive right multiplications.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn push(&mut self, g: Generator) {
        self.0.push(g);
    }

    pub fn pop(&mut self) -> Option<Generator> {
        self.0.pop()
    }

    /// The formal inverse: reversed, each letter inverted.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|g| g.inverse()).collect())
    }

    /// Lexicographic comparison under an arbitrary generator order, given as ranks.
    pub fn cmp_by_rank(&self, other: &Word, rank: &[usize; 4]) -> std::cmp::Ordering {
        let a = self.0.iter().map(|g| rank[g.index()]);
        let b = other.0.iter().map(|g| rank[g.index()]);
        a.cmp(b)
    }
}

impl From<Vec<Generator>> for Word {
    fn from(v: Vec<Generator>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.0 {
            write!(f, "{}", g.letter())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts the compact alphabet (`aAbB`, whitespace ignored) or whitespace/`*`
    /// separated verbose tokens `x0`, `x0^-1`, `x1`, `x1^-1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('x') {
            return s
                .split(|c: char| c.is_whitespace() || c == '*' || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    Generator::from_verbose(t).ok_or_else(|| Error::Parse(format!("unknown generator token {t:?}")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Word);
        }
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                Generator::from_letter(c)
                    .ok_or_else(|| Error::Parse(format!("invalid letter {c:?}; expected one of a, A, b, B")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}
