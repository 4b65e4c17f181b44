use std::fmt;

/// Label of one side (top or bottom) of a gap column.
///
/// Assigned in priority order: `L` exterior and left of the pointer, `N` interior
/// and immediately left of a caret, `X` exterior and immediately left of a caret,
/// `R` exterior and right of the pointer, `I` any other interior gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GapLabel {
    I,
    N,
    L,
    R,
    X,
}

impl GapLabel {
    pub const ALL: [GapLabel; 5] = [GapLabel::I, GapLabel::N, GapLabel::L, GapLabel::R, GapLabel::X];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_interior(self) -> bool {
        matches!(self, GapLabel::I | GapLabel::N)
    }
}

impl fmt::Display for GapLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            GapLabel::I => 'I',
            GapLabel::N => 'N',
            GapLabel::L => 'L',
            GapLabel::R => 'R',
            GapLabel::X => 'X',
        };
        write!(f, "{c}")
    }
}

/// Column weights indexed by (top label, bottom label). Includes the caret
/// contribution, so the weight of a reduced diagram is the word length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightTable([[u32; 5]; 5]);

const STANDARD: [[u32; 5]; 5] = [
    //  I  N  L  R  X
    [2, 4, 2, 1, 3], // I
    [4, 4, 2, 3, 3], // N
    [2, 2, 2, 1, 1], // L
    [1, 3, 1, 2, 2], // R
    [3, 3, 1, 2, 2], // X
];

impl WeightTable {
    pub const fn standard() -> Self {
        WeightTable(STANDARD)
    }

    /// Arbitrary table, e.g. for fault injection in cross-validation.
    pub const fn from_rows(rows: [[u32; 5]; 5]) -> Self {
        WeightTable(rows)
    }

    #[inline]
    pub fn get(&self, top: GapLabel, bottom: GapLabel) -> u32 {
        self.0[top.index()][bottom.index()]
    }

    pub fn rows(&self) -> [[u32; 5]; 5] {
        self.0
    }

    pub fn is_symmetric(&self) -> bool {
        (0..5).all(|a| (0..5).all(|b| self.0[a][b] == self.0[b][a]))
    }
}

impl Default for WeightTable {
    fn default() -> Self {
        Self::standard()
    }
}

/// Standard weight of a single column.
#[inline]
pub fn column_weight(top: GapLabel, bottom: GapLabel) -> u32 {
    WeightTable::standard().get(top, bottom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use GapLabel::*;

    #[test]
    fn standard_table_is_symmetric() {
        let t = WeightTable::standard();
        let mut checked = 0;
        for a in GapLabel::ALL {
            for b in GapLabel::ALL {
                assert_eq!(t.get(a, b), t.get(b, a), "W({a},{b})");
                checked += 1;
            }
        }
        assert_eq!(checked, 25);
        assert!(t.is_symmetric());
    }

    #[test]
    fn listed_entries() {
        let expect = [
            (I, I, 2),
            (I, N, 4),
            (I, L, 2),
            (I, R, 1),
            (I, X, 3),
            (N, N, 4),
            (N, L, 2),
            (N, R, 3),
            (N, X, 3),
            (L, L, 2),
            (L, R, 1),
            (L, X, 1),
            (R, R, 2),
            (R, X, 2),
            (X, X, 2),
        ];
        for (a, b, w) in expect {
            assert_eq!(column_weight(a, b), w, "W({a},{b})");
            assert_eq!(column_weight(b, a), w, "W({b},{a})");
        }
    }

    #[test]
    fn weights_between_one_and_four() {
        for a in GapLabel::ALL {
            for b in GapLabel::ALL {
                assert!((1..=4).contains(&column_weight(a, b)));
            }
        }
    }
}
