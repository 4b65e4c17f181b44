//! Polynomial-time enumeration of reduced forest diagrams by weight.
//!
//! A diagram is built one column at a time. Each half (top, bottom) is
//! summarised by a [`HalfState`]: the label of its last gap, which side of the
//! pointer that gap is on, and the excess of the tree under construction. Counts
//! of partial diagrams are kept per `(weight, top state, bottom state)`; since a
//! column weighs between 1 and 4, only five consecutive weight levels are live at
//! any time.
//!
//! The raw count `h_n` includes diagrams padded with at least one empty `[L/L]`
//! column on the left and at least one empty `[R/R]` column on the right. The
//! padding is removed by `f_n = h_{n+4} - 2 h_{n+2} + h_n`.

use std::collections::VecDeque;
use std::fmt;

use log::debug;
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::forest_core::{BinaryTree, Forest, ForestDiagram, GapLabel, WeightTable};
use crate::series::{GrowthSeries, SeriesKind, SeriesSource};
use crate::tree_codec::{decode_word, CodeLetter, CodeWord};

/// Position of a gap relative to the pointed tree of its forest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// State of one half of a partial diagram: `(label, side, excess)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfState {
    pub label: GapLabel,
    pub side: Side,
    pub excess: u32,
}

impl HalfState {
    /// The empty leading column.
    pub const START: HalfState = HalfState { label: GapLabel::L, side: Side::Left, excess: 0 };
    /// The empty trailing column.
    pub const END: HalfState = HalfState { label: GapLabel::R, side: Side::Right, excess: 0 };

    pub fn new(label: GapLabel, side: Side, excess: u32) -> Result<Self> {
        HalfState { label, side, excess }.validated()
    }

    pub fn is_valid(&self) -> bool {
        match self.label {
            GapLabel::L => self.side == Side::Left && self.excess == 0,
            GapLabel::R | GapLabel::X => self.side == Side::Right && self.excess == 0,
            GapLabel::N => self.excess >= 1,
            GapLabel::I => true,
        }
    }

    fn validated(self) -> Result<Self> {
        if self.is_valid() {
            Ok(self)
        } else {
            Err(Error::InvalidState(self.to_string()))
        }
    }
}

impl fmt::Display for HalfState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.label, self.side, self.excess)
    }
}

const fn hs(label: GapLabel, side: Side, excess: u32) -> HalfState {
    HalfState { label, side, excess }
}

fn continue_tree(side: Side, h: u32, out: &mut Vec<HalfState>) {
    out.push(hs(GapLabel::N, side, h + 1));
    out.push(hs(GapLabel::N, side, h));
    out.push(hs(GapLabel::I, side, h));
    out.push(hs(GapLabel::I, side, h - 1));
}

/// Successors of a state lying left of the pointer.
pub fn transitions_left(s: HalfState) -> Result<Vec<HalfState>> {
    use GapLabel::*;
    use Side::*;
    let s = s.validated()?;
    if s.side != Left {
        return Err(Error::InvalidState(format!("{s} is not left of the pointer")));
    }
    let mut out = Vec::with_capacity(7);
    match (s.label, s.excess) {
        (L, _) => out.extend([
            hs(L, Left, 0),
            hs(N, Left, 1),
            hs(I, Left, 0),
            hs(N, Right, 1),
            hs(I, Right, 0),
            hs(R, Right, 0),
            hs(X, Right, 0),
        ]),
        (I, 0) => out.extend([hs(N, Left, 1), hs(I, Left, 0), hs(L, Left, 0)]),
        (N | I, h) => continue_tree(Left, h, &mut out),
        _ => unreachable!("validated"),
    }
    Ok(out)
}

/// Successors of a state lying right of the pointer.
pub fn transitions_right(s: HalfState) -> Result<Vec<HalfState>> {
    use GapLabel::*;
    use Side::*;
    let s = s.validated()?;
    if s.side != Right {
        return Err(Error::InvalidState(format!("{s} is not right of the pointer")));
    }
    let mut out = Vec::with_capacity(4);
    match (s.label, s.excess) {
        (R, _) => out.extend([hs(R, Right, 0), hs(X, Right, 0)]),
        (X, _) => out.extend([hs(N, Right, 1), hs(I, Right, 0)]),
        (I, 0) => out.extend([hs(N, Right, 1), hs(I, Right, 0), hs(R, Right, 0), hs(X, Right, 0)]),
        (N | I, h) => continue_tree(Right, h, &mut out),
        _ => unreachable!("validated"),
    }
    Ok(out)
}

/// Successors of a state, dispatched on its side.
pub fn transitions(s: HalfState) -> Result<Vec<HalfState>> {
    match s.side {
        Side::Left => transitions_left(s),
        Side::Right => transitions_right(s),
    }
}

/// Standard weight of a column with the given top and bottom labels.
pub fn column_weight(top: GapLabel, bottom: GapLabel) -> u32 {
    crate::forest_core::column_weight(top, bottom)
}

/// Whether moving from labels `(old_top, old_bottom)` to `(new_top, new_bottom)`
/// closes a caret on both sides over the same gap.
#[inline]
pub fn creates_common_caret(old_top: GapLabel, old_bottom: GapLabel, new_top: GapLabel, new_bottom: GapLabel) -> bool {
    new_top == GapLabel::I && new_bottom == GapLabel::I && old_top != GapLabel::I && old_bottom != GapLabel::I
}

// Dense state numbering. L, R, X take 0..3; tree states follow in blocks of four
// per excess, so every state of excess <= e has index < state_count(e).
fn state_index(s: HalfState) -> usize {
    match s.label {
        GapLabel::L => 0,
        GapLabel::R => 1,
        GapLabel::X => 2,
        GapLabel::N | GapLabel::I => {
            let kind = 2 * (s.side == Side::Right) as usize + (s.label == GapLabel::I) as usize;
            3 + 4 * s.excess as usize + kind
        }
    }
}

fn state_at(idx: usize) -> HalfState {
    match idx {
        0 => HalfState::START,
        1 => HalfState::END,
        2 => hs(GapLabel::X, Side::Right, 0),
        _ => {
            let k = idx - 3;
            let side = if k % 4 >= 2 { Side::Right } else { Side::Left };
            let label = if k % 2 == 1 { GapLabel::I } else { GapLabel::N };
            hs(label, side, (k / 4) as u32)
        }
    }
}

fn state_count(max_excess: u32) -> usize {
    3 + 4 * (max_excess as usize + 1)
}

/// Options for [`enumerate_padded_with`].
#[derive(Debug, Clone, Default)]
pub struct EnumerationConfig {
    /// Column weights; the standard table unless injecting a fault.
    pub weights: WeightTable,
    /// Drop partial diagrams whose open trees cannot be closed within the
    /// remaining weight budget. Off by default.
    pub prune: bool,
}

impl EnumerationConfig {
    pub fn pruned() -> Self {
        EnumerationConfig { prune: true, ..Default::default() }
    }
}

/// Bookkeeping gathered during a run, used by the structural checks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    /// Smallest and largest `target weight - source weight` of any transition.
    pub min_step: u32,
    pub max_step: u32,
    /// Largest number of nonzero stored entries in one weight level. With a
    /// symmetric weight table only `top <= bottom` is stored.
    pub max_live_pairs: usize,
    /// Largest excess seen on either side.
    pub max_excess: u32,
    /// Transitions discarded for creating a common caret.
    pub rejected: u64,
    /// Partial diagrams discarded by pruning.
    pub pruned: u64,
}

/// Counts for one weight over states `0..dim` on each side. When `symmetric`,
/// the count of `(t, b)` equals that of `(b, t)` and only `t <= b` is stored.
struct Level {
    weight: usize,
    dim: usize,
    symmetric: bool,
    counts: Vec<BigUint>,
}

impl Level {
    fn new(weight: usize, dim: usize, symmetric: bool) -> Self {
        Level { weight, dim, symmetric, counts: vec![BigUint::zero(); Self::size(dim, symmetric)] }
    }

    fn size(dim: usize, symmetric: bool) -> usize {
        if symmetric {
            dim * (dim + 1) / 2
        } else {
            dim * dim
        }
    }

    fn slot(&self, t: usize, b: usize) -> Option<usize> {
        if self.symmetric {
            let (lo, hi) = if t <= b { (t, b) } else { (b, t) };
            (hi < self.dim).then(|| hi * (hi + 1) / 2 + lo)
        } else {
            (t < self.dim && b < self.dim).then(|| t * self.dim + b)
        }
    }

    fn get(&self, top: HalfState, bottom: HalfState) -> Option<&BigUint> {
        self.slot(state_index(top), state_index(bottom)).map(|i| &self.counts[i])
    }
}

/// Counts of partial diagrams for five consecutive weights.
///
/// Level `w` only holds states of excess at most `excess_cap(w)`, which bounds
/// the table at `O(w^2)` entries.
pub struct StateTable {
    levels: VecDeque<Level>,
    cap_step: u32,
    symmetric: bool,
    /// With pruning, `(max_weight, cost)` also bounds the excess kept at each level.
    prune: Option<(usize, ClosingCost)>,
}

impl StateTable {
    pub const WINDOW: usize = 5;

    fn new(base: usize, cap_step: u32, symmetric: bool, prune: Option<(usize, ClosingCost)>) -> Self {
        let mut t = StateTable { levels: VecDeque::with_capacity(Self::WINDOW), cap_step, symmetric, prune };
        for w in base..base + Self::WINDOW {
            let dim = t.dim(w);
            t.levels.push_back(Level::new(w, dim, symmetric));
        }
        t
    }

    /// Largest excess that a partial diagram of weight `w` can carry: every
    /// column that raises the excess of one side costs at least `cap_step`.
    fn reachable_excess(&self, w: usize) -> u32 {
        (w.saturating_sub(2) / self.cap_step as usize) as u32
    }

    /// Largest excess stored at weight `w`, lowered under pruning to what can
    /// still be closed.
    fn excess_cap(&self, w: usize) -> u32 {
        let reachable = self.reachable_excess(w);
        match self.prune.and_then(|(max_weight, cost)| cost.excess_limit(w, max_weight)) {
            Some(limit) => reachable.min(limit),
            None => reachable,
        }
    }

    fn dim(&self, w: usize) -> usize {
        state_count(self.excess_cap(w))
    }

    fn base(&self) -> usize {
        self.levels[0].weight
    }

    /// Count at `(w, top, bottom)`; zero outside the live window.
    pub fn get(&self, w: usize, top: HalfState, bottom: HalfState) -> BigUint {
        let base = self.base();
        if w < base || w >= base + self.levels.len() {
            return BigUint::zero();
        }
        self.levels[w - base].get(top, bottom).cloned().unwrap_or_default()
    }

    pub fn live_weights(&self) -> std::ops::Range<usize> {
        let base = self.base();
        base..base + self.levels.len()
    }

    fn add(&mut self, w: usize, t: usize, b: usize, c: &BigUint) -> Result<()> {
        let base = self.base();
        if w < base || w >= base + self.levels.len() {
            return Err(Error::InvalidState(format!(
                "write to weight {w} outside the live window {base}..{}",
                base + self.levels.len()
            )));
        }
        let level = &mut self.levels[w - base];
        let Some(i) = level.slot(t, b) else {
            return Err(Error::InvalidState(format!(
                "excess of {} / {} exceeds the bound for weight {w}",
                state_at(t),
                state_at(b)
            )));
        };
        level.counts[i] += c;
        Ok(())
    }

    /// Removes the lowest level; the caller processes it and hands it back to
    /// [`StateTable::recycle`].
    fn take_lowest(&mut self) -> Level {
        self.levels.pop_front().expect("window is never empty")
    }

    /// Reopens a processed level as the new top of the window, keeping the
    /// allocations of its counters.
    fn recycle(&mut self, mut level: Level) {
        level.weight += Self::WINDOW;
        level.dim = self.dim(level.weight);
        level.counts.iter_mut().for_each(BigUint::set_zero);
        level.counts.resize(Level::size(level.dim, self.symmetric), BigUint::zero());
        if level.counts.capacity() > 2 * level.counts.len() {
            level.counts.shrink_to_fit();
        }
        self.levels.push_back(level);
    }
}

/// Counts `h_n` of padded diagrams, indexed by weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedSeries {
    pub h: Vec<BigUint>,
}

/// Counts `f_n` of reduced diagrams, i.e. sphere sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectedSeries {
    pub f: Vec<BigUint>,
}

fn check_weights(table: &WeightTable) -> Result<u32> {
    for a in GapLabel::ALL {
        for b in GapLabel::ALL {
            let w = table.get(a, b);
            if !(1..=4).contains(&w) {
                return Err(Error::InvalidState(format!("column weight W({a},{b}) = {w} outside 1..=4")));
            }
        }
    }
    let cheapest_n = GapLabel::ALL
        .iter()
        .map(|&x| table.get(GapLabel::N, x).min(table.get(x, GapLabel::N)))
        .min()
        .expect("five labels");
    Ok(cheapest_n)
}

/// Weight still needed after reaching a column with open trees of total excess
/// `open`, unless that column is already the final `[R/R]`. Each closing column
/// lowers each side's excess by at most one.
#[derive(Debug, Clone, Copy)]
struct ClosingCost {
    per_unit: u32,
    last: u32,
}

impl ClosingCost {
    fn new(table: &WeightTable) -> Self {
        let single = GapLabel::ALL
            .iter()
            .map(|&x| table.get(GapLabel::I, x).min(table.get(x, GapLabel::I)))
            .min()
            .expect("five labels");
        ClosingCost {
            per_unit: single.min(table.get(GapLabel::I, GapLabel::I) / 2),
            last: table.get(GapLabel::R, GapLabel::R),
        }
    }

    fn of(self, open: u32) -> usize {
        (self.per_unit * open + self.last) as usize
    }

    /// Largest one-side excess that can still close by `max_weight` from weight `w`.
    fn excess_limit(self, w: usize, max_weight: usize) -> Option<u32> {
        if self.per_unit == 0 {
            return None;
        }
        let room = max_weight.saturating_sub(w + self.last as usize);
        Some((room / self.per_unit as usize) as u32)
    }
}

type Successors = Vec<Vec<(usize, GapLabel, u32)>>;

fn successor_lists(max_excess: u32) -> Successors {
    (0..state_count(max_excess))
        .map(|idx| {
            let s = state_at(idx);
            match transitions(s) {
                Ok(next) => next
                    .into_iter()
                    .filter(|n| n.excess <= max_excess)
                    .map(|n| (state_index(n), n.label, n.excess))
                    .collect(),
                Err(_) => Vec::new(),
            }
        })
        .collect()
}

/// Rough peak memory of [`growth_series_streaming`] up to `max_n` with the
/// standard weights: five levels of mirrored entries plus the digits of the
/// live counters. Under pruning the widest level sits near two thirds of the
/// run, where about a third of the weight is left for the excess.
pub fn estimated_peak_bytes(max_n: usize, prune: bool) -> u64 {
    let max_weight = max_n + 4;
    let span = max_weight.saturating_sub(2);
    let cap = if prune { span / 3 } else { span / 2 };
    let dim = state_count(cap as u32) as u64;
    let cells = StateTable::WINDOW as u64 * dim * (dim + 1) / 2;
    // Counts grow roughly like 2.62^n, about 1.39 bits per unit of weight.
    let limbs = (max_weight as u64 * 139 / 100) / 64 + 1;
    cells * std::mem::size_of::<BigUint>() as u64 + cells / 2 * limbs * 8
}

/// Counts padded diagrams of every weight up to `max_weight`.
pub fn enumerate_padded(max_weight: usize) -> PaddedSeries {
    enumerate_padded_with(max_weight, &EnumerationConfig::default(), |_, _| {}).expect("the standard table is valid").0
}

/// As [`enumerate_padded`], calling `on_level(n, h_n)` as soon as weight `n` is final.
pub fn enumerate_padded_with<F>(
    max_weight: usize,
    config: &EnumerationConfig,
    on_level: F,
) -> Result<(PaddedSeries, EnumerationStats)>
where
    F: FnMut(usize, &BigUint),
{
    enumerate(max_weight, config, config.weights.is_symmetric(), on_level)
}

fn enumerate<F>(
    max_weight: usize,
    config: &EnumerationConfig,
    symmetric: bool,
    mut on_level: F,
) -> Result<(PaddedSeries, EnumerationStats)>
where
    F: FnMut(usize, &BigUint),
{
    let cap_step = check_weights(&config.weights)?;
    let weights = config.weights;
    let mut stats = EnumerationStats { min_step: u32::MAX, ..Default::default() };
    let mut h = Vec::with_capacity(max_weight + 1);
    for n in 0..=max_weight.min(1) {
        h.push(BigUint::zero());
        on_level(n, &h[n]);
    }
    if max_weight < 2 {
        stats.min_step = 0;
        return Ok((PaddedSeries { h }, stats));
    }

    let closing = ClosingCost::new(&weights);
    let mut table = StateTable::new(2, cap_step, symmetric, config.prune.then_some((max_weight, closing)));
    let succ = successor_lists(table.reachable_excess(max_weight));
    let start = state_index(HalfState::START);
    table.add(2, start, start, &BigUint::from(1u32))?;
    let end = state_index(HalfState::END);

    for n in 2..=max_weight {
        let level = table.take_lowest();
        debug_assert_eq!(level.weight, n);
        let h_n = level.get(HalfState::END, HalfState::END).cloned().unwrap_or_default();
        on_level(n, &h_n);
        h.push(h_n);
        if n == max_weight {
            break;
        }

        let dim = level.dim;
        let mut live = 0;
        for t in 0..dim {
            let top = state_at(t);
            let bottoms = if symmetric { t..dim } else { 0..dim };
            for b in bottoms {
                let c = &level.counts[level.slot(t, b).expect("in range")];
                if c.is_zero() {
                    continue;
                }
                live += 1;
                let bottom = state_at(b);
                stats.max_excess = stats.max_excess.max(top.excess).max(bottom.excess);
                for &(t2, top_label, top_excess) in &succ[t] {
                    for &(b2, bottom_label, bottom_excess) in &succ[b] {
                        // A stored diagonal entry stands for itself; an off-diagonal
                        // one also for its mirror, whose successors are the mirrors
                        // of these. Mirrored targets share a slot, except on the
                        // diagonal where both land on the same entry.
                        let copies = match (symmetric, t == b) {
                            (false, _) => 1,
                            (true, true) if t2 > b2 => continue,
                            (true, true) => 1,
                            (true, false) if t2 == b2 => 2,
                            (true, false) => 1,
                        };
                        if creates_common_caret(top.label, bottom.label, top_label, bottom_label) {
                            stats.rejected += 1;
                            continue;
                        }
                        let step = weights.get(top_label, bottom_label);
                        stats.min_step = stats.min_step.min(step);
                        stats.max_step = stats.max_step.max(step);
                        let target = n + step as usize;
                        if target > max_weight {
                            continue;
                        }
                        if config.prune
                            && !(t2 == end && b2 == end)
                            && target + closing.of(top_excess + bottom_excess) > max_weight
                        {
                            stats.pruned += 1;
                            continue;
                        }
                        for _ in 0..copies {
                            table.add(target, t2, b2, c)?;
                        }
                    }
                }
            }
        }
        stats.max_live_pairs = stats.max_live_pairs.max(live);
        debug!("weight {n}: {live} live state pairs");
        if n + StateTable::WINDOW <= max_weight {
            table.recycle(level);
        }
    }
    if stats.min_step == u32::MAX {
        stats.min_step = 0;
    }
    Ok((PaddedSeries { h }, stats))
}

/// Removes the boundary padding: `f_n = h_{n+4} - 2 h_{n+2} + h_n`.
pub fn correct_series(padded: &PaddedSeries) -> Result<CorrectedSeries> {
    let mut corrector = Corrector::default();
    let mut f = Vec::new();
    for (n, h) in padded.h.iter().enumerate() {
        if let Some(v) = corrector.push(n, h)? {
            f.push(v);
        }
    }
    Ok(CorrectedSeries { f })
}

/// Turns a stream of `h_n` into a stream of `f_n` with a lag of four.
#[derive(Default)]
struct Corrector {
    recent: VecDeque<BigInt>,
}

impl Corrector {
    fn push(&mut self, n: usize, h: &BigUint) -> Result<Option<BigUint>> {
        self.recent.push_back(BigInt::from(h.clone()));
        if self.recent.len() < 5 {
            return Ok(None);
        }
        let r = &self.recent;
        let v: BigInt = &r[4] - (&r[2] << 1usize) + &r[0];
        self.recent.pop_front();
        if v.is_negative() {
            return Err(Error::NegativeCoefficient { n: n - 4, value: v.to_string() });
        }
        Ok(Some(v.magnitude().clone()))
    }
}

/// Sphere sizes `f(0..=max_n)`.
pub fn growth_series(max_n: usize) -> Result<GrowthSeries> {
    growth_series_streaming(max_n, &EnumerationConfig::default(), |_, _| {})
}

/// As [`growth_series`], calling `on_value(n, f(n))` as each value is determined.
pub fn growth_series_streaming<F>(max_n: usize, config: &EnumerationConfig, mut on_value: F) -> Result<GrowthSeries>
where
    F: FnMut(usize, &BigUint),
{
    let mut corrector = Corrector::default();
    let mut values = Vec::with_capacity(max_n + 1);
    let mut failure = None;
    enumerate_padded_with(max_n + 4, config, |n, h| {
        if failure.is_some() {
            return;
        }
        match corrector.push(n, h) {
            Ok(Some(v)) => {
                on_value(values.len(), &v);
                values.push(v);
            }
            Ok(None) => {}
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(GrowthSeries::new(values, SeriesKind::Elements, SeriesSource::AlgorithmB))
}

/// Top and bottom state of one column.
pub type ColumnState = (HalfState, HalfState);

/// Builds the reduced diagram whose padded column states are `path`.
///
/// `path` must start with `[L/L]`, end with `[R/R]`, follow the transition
/// rules without creating a common caret, and carry exactly one padding
/// column at each end.
pub fn realize(path: &[ColumnState]) -> Result<ForestDiagram> {
    let start = (HalfState::START, HalfState::START);
    let end = (HalfState::END, HalfState::END);
    let k = path.len();
    if k < 2 || path[0] != start || path[k - 1] != end {
        return Err(Error::InvalidState("a padded path runs from [L/L] to [R/R]".into()));
    }
    if (k > 2 && path[1] == start) || (k > 2 && path[k - 2] == end) {
        return Err(Error::InvalidState("more than one padding column at an end".into()));
    }
    for w in path.windows(2) {
        let ((t, b), (t2, b2)) = (w[0], w[1]);
        if !transitions(t)?.contains(&t2) || !transitions(b)?.contains(&b2) {
            return Err(Error::InvalidState(format!("no transition [{t}/{b}] -> [{t2}/{b2}]")));
        }
        if creates_common_caret(t.label, b.label, t2.label, b2.label) {
            return Err(Error::InvalidState(format!("[{t}/{b}] -> [{t2}/{b2}] makes a common caret")));
        }
    }
    let top = realize_half(path.iter().map(|c| c.0))?;
    let bottom = realize_half(path.iter().map(|c| c.1))?;
    ForestDiagram::from_forests(top, bottom)
}

/// Reads off trees and pointer from one half of a padded path, then drops the
/// two padding leaves.
fn realize_half(states: impl Iterator<Item = HalfState>) -> Result<Forest> {
    let mut trees = Vec::new();
    let mut code = Vec::new();
    let mut pointer = None;
    let mut prev: Option<HalfState> = None;
    for s in states {
        if pointer.is_none() && s.side == Side::Right {
            pointer = Some(trees.len());
        }
        match s.label {
            GapLabel::L | GapLabel::R | GapLabel::X => {
                trees.push(close_tree(&mut code)?);
            }
            GapLabel::N | GapLabel::I => {
                // nN raises the excess, nI and iN keep it, iI lowers it.
                let lower = match prev {
                    Some(p) if p.label.is_interior() => {
                        let keeps = s.excess == p.excess;
                        if (s.label == GapLabel::N) != keeps {
                            CodeLetter::n
                        } else {
                            CodeLetter::i
                        }
                    }
                    _ => CodeLetter::n,
                };
                let upper = if s.label == GapLabel::N { CodeLetter::N } else { CodeLetter::I };
                code.extend([lower, upper]);
            }
        }
        prev = Some(s);
    }
    trees.push(close_tree(&mut code)?);
    let pointer = pointer.ok_or_else(|| Error::InvalidState("pointer never passed".into()))?;
    if trees.len() < 3 || !trees[0].is_leaf() || !trees[trees.len() - 1].is_leaf() || pointer == 0 {
        return Err(Error::InvalidState("padding leaves missing".into()));
    }
    trees.pop();
    trees.remove(0);
    Forest::from_trees(&trees, pointer - 1)
}

fn close_tree(code: &mut Vec<CodeLetter>) -> Result<BinaryTree> {
    let word = CodeWord::new(std::mem::take(code));
    if word.is_empty() {
        Ok(BinaryTree::Leaf)
    } else {
        decode_word(&word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;
    use GapLabel::*;
    use Side::*;

    const TABLE: [u64; 23] = [
        1, 4, 12, 36, 108, 314, 906, 2576, 7280, 20352, 56664, 156570, 431238, 1180968, 3225940, 8773036, 23809148,
        64388402, 173829458, 467950860, 1257901236, 3373450744, 9035758992,
    ];

    fn all_states(max_excess: u32) -> Vec<HalfState> {
        (0..state_count(max_excess)).map(state_at).filter(|s| s.is_valid()).collect()
    }

    fn set(v: Vec<HalfState>) -> BTreeSet<HalfState> {
        v.into_iter().collect()
    }

    #[test]
    fn successor_cardinalities() {
        assert_eq!(transitions(hs(L, Left, 0)).unwrap().len(), 7);
        assert_eq!(transitions(hs(R, Right, 0)).unwrap().len(), 2);
        assert_eq!(transitions(hs(X, Right, 0)).unwrap().len(), 2);
        assert_eq!(transitions(hs(I, Left, 0)).unwrap().len(), 3);
        assert_eq!(transitions(hs(I, Right, 0)).unwrap().len(), 4);
        for s in all_states(6).into_iter().filter(|s| s.excess > 0) {
            assert_eq!(transitions(s).unwrap().len(), 4, "{s}");
        }
    }

    #[test]
    fn listed_successor_sets() {
        assert_eq!(
            set(transitions_left(hs(L, Left, 0)).unwrap()),
            set(vec![
                hs(L, Left, 0),
                hs(R, Right, 0),
                hs(X, Right, 0),
                hs(N, Left, 1),
                hs(I, Left, 0),
                hs(N, Right, 1),
                hs(I, Right, 0)
            ])
        );
        assert_eq!(
            set(transitions_left(hs(N, Left, 1)).unwrap()),
            set(vec![hs(N, Left, 2), hs(N, Left, 1), hs(I, Left, 1), hs(I, Left, 0)])
        );
        let after_i = transitions_left(hs(I, Left, 0)).unwrap();
        assert_eq!(set(after_i.clone()), set(vec![hs(N, Left, 1), hs(I, Left, 0), hs(L, Left, 0)]));
        assert!(after_i.iter().all(|s| !matches!(s.label, R | X)));
        assert_eq!(
            set(transitions_right(hs(I, Right, 0)).unwrap()),
            set(vec![hs(N, Right, 1), hs(I, Right, 0), hs(R, Right, 0), hs(X, Right, 0)])
        );
        assert_eq!(set(transitions_right(hs(X, Right, 0)).unwrap()), set(vec![hs(N, Right, 1), hs(I, Right, 0)]));
    }

    #[test]
    fn invalid_states_are_refused() {
        for s in [hs(L, Right, 0), hs(L, Left, 1), hs(R, Left, 0), hs(X, Right, 2), hs(N, Left, 0)] {
            assert!(matches!(transitions(s), Err(Error::InvalidState(_))), "{s}");
            assert!(HalfState::new(s.label, s.side, s.excess).is_err());
        }
        assert!(transitions_left(hs(I, Right, 0)).is_err());
        assert!(transitions_right(hs(I, Left, 0)).is_err());
    }

    #[test]
    fn successors_are_valid_and_never_return_left() {
        for s in all_states(8) {
            for n in transitions(s).unwrap() {
                assert!(n.is_valid(), "{s} -> {n}");
                if s.side == Right {
                    assert_eq!(n.side, Right, "{s} -> {n}");
                }
                if s.label == R {
                    assert_ne!(n.label, I, "R must not be followed by I");
                }
                assert!(n.excess.abs_diff(s.excess) <= 1);
            }
        }
    }

    #[test]
    fn rejected_pairs_are_exactly_the_nine() {
        let states = all_states(3);
        let mut rejected_from = BTreeSet::new();
        for &t in &states {
            for &b in &states {
                for t2 in transitions(t).unwrap() {
                    for b2 in transitions(b).unwrap() {
                        if creates_common_caret(t.label, b.label, t2.label, b2.label) {
                            assert_eq!((t2.label, b2.label), (I, I));
                            rejected_from.insert((t.label, b.label));
                        }
                    }
                }
            }
        }
        let expect: BTreeSet<_> = [L, N, X].iter().flat_map(|&a| [L, N, X].iter().map(move |&b| (a, b))).collect();
        assert_eq!(rejected_from, expect);
    }

    #[test]
    fn state_numbering_round_trips() {
        for (k, s) in all_states(5).into_iter().enumerate() {
            assert_eq!(state_at(state_index(s)), s, "#{k}");
        }
        assert!(all_states(5).iter().all(|s| state_index(*s) < state_count(5)));
    }

    #[test]
    fn window_and_excess_bounds() {
        let (padded, stats) = enumerate_padded_with(40, &EnumerationConfig::default(), |_, _| {}).unwrap();
        assert_eq!(padded.h.len(), 41);
        assert_eq!((stats.min_step, stats.max_step), (1, 4));
        assert!(stats.max_excess <= 40);
        assert!(stats.rejected > 0);
    }

    #[test]
    fn short_padded_values() {
        let h = enumerate_padded(8).h;
        assert!(h[..4].iter().all(Zero::is_zero));
        assert_eq!(h[4], BigUint::from(1u32));
        assert_eq!(h[5], BigUint::from(4u32));
    }

    #[test]
    fn streamed_levels_are_in_order() {
        let mut seen = Vec::new();
        enumerate_padded_with(12, &EnumerationConfig::default(), |n, _| seen.push(n)).unwrap();
        assert_eq!(seen, (0..=12).collect::<Vec<_>>());
    }

    #[test]
    fn reproduces_table() {
        let f = growth_series(22).unwrap();
        let expect: Vec<BigUint> = TABLE.iter().map(|&v| BigUint::from(v)).collect();
        assert_eq!(f.values, expect);
        assert_eq!(f.source, SeriesSource::AlgorithmB);
    }

    #[test]
    fn mirrored_storage_matches_full_storage() {
        for config in [EnumerationConfig::default(), EnumerationConfig::pruned()] {
            let (half, _) = enumerate(60, &config, true, |_, _| {}).unwrap();
            let (full, stats) = enumerate(60, &config, false, |_, _| {}).unwrap();
            assert_eq!(half, full);
            assert!(stats.max_live_pairs > 0);
        }
    }

    #[test]
    fn memory_estimate_tracks_size() {
        let small = estimated_peak_bytes(100, false);
        let large = estimated_peak_bytes(200, false);
        assert!(large > 3 * small && large < 8 * small, "{small} {large}");
        assert!(estimated_peak_bytes(200, true) < large);
    }

    #[test]
    fn f50() {
        let f = growth_series(50).unwrap();
        assert_eq!(f.values[50].to_string(), "6015840076078706884412");
    }

    #[test]
    fn pruning_does_not_change_counts() {
        let plain = growth_series(50).unwrap();
        let mut streamed = Vec::new();
        let pruned =
            growth_series_streaming(50, &EnumerationConfig::pruned(), |n, v| streamed.push((n, v.clone()))).unwrap();
        assert_eq!(plain.values, pruned.values);
        assert_eq!(streamed.len(), 51);
        assert!(streamed.iter().enumerate().all(|(k, (n, v))| k == *n && *v == plain.values[k]));
    }

    #[test]
    fn correction_matches_manual_expansion() {
        let padded = enumerate_padded(20);
        let f = correct_series(&padded).unwrap().f;
        assert_eq!(f.len(), 17);
        for (n, fn_) in f.iter().enumerate() {
            let lhs = BigInt::from(fn_.clone()) + BigInt::from(padded.h[n + 2].clone()) * 2;
            let rhs = BigInt::from(padded.h[n + 4].clone()) + BigInt::from(padded.h[n].clone());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn correction_flags_negative_coefficients() {
        let bad = PaddedSeries { h: [0u32, 0, 5, 0, 1].iter().map(|&v| BigUint::from(v)).collect() };
        assert!(matches!(correct_series(&bad), Err(Error::NegativeCoefficient { n: 0, .. })));
    }

    #[test]
    fn out_of_range_weights_are_refused() {
        let mut rows = WeightTable::standard().rows();
        rows[1][1] = 5;
        let config = EnumerationConfig { weights: WeightTable::from_rows(rows), prune: false };
        assert!(matches!(growth_series_streaming(10, &config, |_, _| {}), Err(Error::InvalidState(_))));
    }

    #[test]
    fn corrupted_table_changes_counts() {
        let mut rows = WeightTable::standard().rows();
        rows[2][3] = 2;
        rows[3][2] = 2;
        let config = EnumerationConfig { weights: WeightTable::from_rows(rows), prune: false };
        let bad = growth_series_streaming(8, &config, |_, _| {});
        if let Ok(s) = bad {
            assert_ne!(s.values, growth_series(8).unwrap().values);
        }
    }
}
