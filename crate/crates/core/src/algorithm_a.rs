//! Sphere sizes and geodesic counts by walking every geodesic word.
//!
//! For a geodesic `w` of length `n` with prefixes `w_1, ..., w_n`, the weight
//! `prod 1 / |d-(w_i)|` summed over the geodesics ending at one element is exactly
//! one, so summing it over all geodesics of length `n` counts the sphere. Only the
//! current path is stored; nothing is remembered about elements already visited.
//!
//! Every `|d-|` lies in `1..=4`, so each path weight is `1 / (2^a 3^b)`. The walk
//! carries the exponent pair and tallies paths per `(a, b)`; the tally is turned
//! into an [`ExactRational`] at the end.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forest_core::{ForestDiagram, Generator, Word};
use crate::geodesic_classifier::{neighbourhood, GeneratorSet};
use crate::series::{GrowthSeries, SeriesKind, SeriesSource};

/// Lengths beyond this log a runtime warning.
pub const WARN_LENGTH: usize = 16;

/// Arbitrary-precision rational in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn new(numer: BigInt, denom: BigInt) -> Self {
        ExactRational(BigRational::new(numer, denom))
    }

    pub fn from_integer(n: BigInt) -> Self {
        ExactRational(BigRational::from_integer(n))
    }

    /// `1 / k`.
    pub fn reciprocal_of(k: u64) -> Self {
        Self::new(BigInt::one(), BigInt::from(k))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The value as a nonnegative integer, if it is one.
    pub fn to_biguint(&self) -> Option<BigUint> {
        if self.is_integer() && !self.0.is_negative() {
            self.numer().to_biguint()
        } else {
            None
        }
    }
}

impl Add for ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: Self) -> Self {
        ExactRational(self.0 + rhs.0)
    }
}

impl AddAssign for ExactRational {
    fn add_assign(&mut self, rhs: Self) {
        self.0 += rhs.0;
    }
}

impl Mul for ExactRational {
    type Output = ExactRational;
    fn mul(self, rhs: Self) -> Self {
        ExactRational(self.0 * rhs.0)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A permutation of the generators fixing the lexicographic order of the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorOrder([Generator; 4]);

impl GeneratorOrder {
    pub fn new(order: [Generator; 4]) -> Option<Self> {
        let set: GeneratorSet = order.into_iter().collect();
        (set == GeneratorSet::ALL).then_some(GeneratorOrder(order))
    }

    pub fn generators(&self) -> [Generator; 4] {
        self.0
    }

    /// Rank of each generator, indexed by [`Generator::index`].
    pub fn ranks(&self) -> [usize; 4] {
        let mut r = [0; 4];
        for (k, g) in self.0.iter().enumerate() {
            r[g.index()] = k;
        }
        r
    }

    fn members(&self, set: GeneratorSet) -> impl Iterator<Item = Generator> + '_ {
        self.0.iter().copied().filter(move |&g| set.contains(g))
    }
}

impl Default for GeneratorOrder {
    fn default() -> Self {
        GeneratorOrder(Generator::ALL)
    }
}

/// Per-length tallies of geodesics and of path weights `1 / (2^a 3^b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereTally {
    geodesics: Vec<u64>,
    /// `weights[n][a * (n + 1) + b]` counts length-`n` geodesics of weight `1/(2^a 3^b)`.
    weights: Vec<Vec<u64>>,
}

impl SphereTally {
    fn new(max_len: usize) -> Self {
        SphereTally {
            geodesics: vec![0; max_len + 1],
            weights: (0..=max_len).map(|n| vec![0; (2 * n + 1) * (n + 1)]).collect(),
        }
    }

    #[inline]
    fn record(&mut self, len: usize, twos: usize, threes: usize) {
        self.geodesics[len] += 1;
        self.weights[len][twos * (len + 1) + threes] += 1;
    }

    fn merge(&mut self, other: &SphereTally) {
        for (a, b) in self.geodesics.iter_mut().zip(&other.geodesics) {
            *a += b;
        }
        for (wa, wb) in self.weights.iter_mut().zip(&other.weights) {
            for (a, b) in wa.iter_mut().zip(wb) {
                *a += b;
            }
        }
    }

    pub fn max_len(&self) -> usize {
        self.geodesics.len() - 1
    }

    pub fn geodesics(&self, n: usize) -> u64 {
        self.geodesics[n]
    }

    /// The exact sum of path weights over geodesics of length `n`.
    pub fn sphere_rational(&self, n: usize) -> ExactRational {
        let cells = &self.weights[n];
        let max_twos = 2 * n;
        let mut numer = BigInt::zero();
        for (k, &c) in cells.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (twos, threes) = (k / (n + 1), k % (n + 1));
            let scale = (BigInt::one() << (max_twos - twos)) * BigInt::from(3u32).pow((n - threes) as u32);
            numer += scale * BigInt::from(c);
        }
        let denom = (BigInt::one() << max_twos) * BigInt::from(3u32).pow(n as u32);
        ExactRational::new(numer, denom)
    }

    /// `|S(n)|`, failing if the accumulated weight is not an integer.
    pub fn sphere(&self, n: usize) -> Result<BigUint> {
        let r = self.sphere_rational(n);
        r.to_biguint().ok_or(Error::Integrality { n, value: r.to_string() })
    }
}

/// Extra `(twos, threes)` exponents contributed by a factor `1 / k`.
#[inline]
fn factor_exponents(down: usize) -> (usize, usize) {
    match down {
        1 => (0, 0),
        2 => (1, 0),
        3 => (0, 1),
        4 => (2, 0),
        _ => unreachable!("a nonempty geodesic has between 1 and 4 shortening generators, got {down}"),
    }
}

fn walk(
    d: &ForestDiagram,
    len: usize,
    twos: usize,
    threes: usize,
    max_len: usize,
    order: &GeneratorOrder,
    tally: &mut SphereTally,
) {
    let nb = neighbourhood(d, len as u32);
    let (twos, threes) = if len == 0 {
        (0, 0)
    } else {
        let (a, b) = factor_exponents(nb.partition.down.len());
        (twos + a, threes + b)
    };
    tally.record(len, twos, threes);
    if len == max_len {
        return;
    }
    for g in order.members(nb.partition.up) {
        walk(&nb.products[g.index()], len + 1, twos, threes, max_len, order, tally);
    }
}

/// A geodesic prefix at which the walk is split across threads.
struct Seed {
    diagram: ForestDiagram,
    len: usize,
    twos: usize,
    threes: usize,
}

#[allow(clippy::too_many_arguments)]
fn collect_seeds(
    d: &ForestDiagram,
    len: usize,
    twos: usize,
    threes: usize,
    split: usize,
    order: &GeneratorOrder,
    tally: &mut SphereTally,
    seeds: &mut Vec<Seed>,
) {
    if len == split {
        seeds.push(Seed { diagram: d.clone(), len, twos, threes });
        return;
    }
    let nb = neighbourhood(d, len as u32);
    let (twos, threes) = if len == 0 {
        (0, 0)
    } else {
        let (a, b) = factor_exponents(nb.partition.down.len());
        (twos + a, threes + b)
    };
    tally.record(len, twos, threes);
    for g in order.members(nb.partition.up) {
        collect_seeds(&nb.products[g.index()], len + 1, twos, threes, split, order, tally, seeds);
    }
}

/// Options for the geodesic walk.
#[derive(Debug, Clone, Copy, Default)]
pub struct WalkConfig {
    pub order: GeneratorOrder,
    /// Split the walk across the rayon pool at this prefix length (0 = sequential).
    pub parallel_split: usize,
}

impl WalkConfig {
    pub fn parallel() -> Self {
        WalkConfig { parallel_split: 3, ..Self::default() }
    }
}

/// Walks all geodesics of length at most `max_len` once, tallying every length.
pub fn tally_spheres(max_len: usize, config: &WalkConfig) -> SphereTally {
    if max_len > WARN_LENGTH {
        log::warn!("geodesic walk to length {max_len}: runtime grows like the number of geodesics (about 2.8^n)");
    }
    let mut tally = SphereTally::new(max_len);
    let identity = ForestDiagram::identity();
    let split = config.parallel_split.min(max_len);
    if split == 0 {
        walk(&identity, 0, 0, 0, max_len, &config.order, &mut tally);
        return tally;
    }
    let mut seeds = Vec::new();
    collect_seeds(&identity, 0, 0, 0, split, &config.order, &mut tally, &mut seeds);
    let parts: Vec<SphereTally> = seeds
        .par_iter()
        .map(|s| {
            let mut t = SphereTally::new(max_len);
            walk(&s.diagram, s.len, s.twos, s.threes, max_len, &config.order, &mut t);
            t
        })
        .collect();
    for p in &parts {
        tally.merge(p);
    }
    tally
}

/// `|S(n)|` by weighted geodesic counting.
pub fn count_sphere(n: usize) -> Result<BigUint> {
    tally_spheres(n, &WalkConfig::default()).sphere(n)
}

/// `|Γ_n|`, the number of geodesic words of length `n`.
pub fn count_geodesics(n: usize) -> BigUint {
    BigUint::from(tally_spheres(n, &WalkConfig::default()).geodesics(n))
}

/// f(0..=max_len) and g(0..=max_len) from one walk.
pub fn growth_and_geodesic_series(max_len: usize, config: &WalkConfig) -> Result<(GrowthSeries, GrowthSeries)> {
    let tally = tally_spheres(max_len, config);
    let f = (0..=max_len).map(|n| tally.sphere(n)).collect::<Result<Vec<_>>>()?;
    let g = (0..=max_len).map(|n| BigUint::from(tally.geodesics(n))).collect();
    Ok((
        GrowthSeries::new(f, SeriesKind::Elements, SeriesSource::AlgorithmA),
        GrowthSeries::new(g, SeriesKind::Geodesics, SeriesSource::AlgorithmA),
    ))
}

/// Visits every geodesic of length `n`, in lexicographic order, by recursive descent.
pub fn enumerate_geodesics<F: FnMut(&Word)>(n: usize, visit: F) {
    enumerate_geodesics_in_order(n, &GeneratorOrder::default(), visit)
}

pub fn enumerate_geodesics_in_order<F: FnMut(&Word)>(n: usize, order: &GeneratorOrder, mut visit: F) {
    fn rec<F: FnMut(&Word)>(d: &ForestDiagram, w: &mut Word, n: usize, order: &GeneratorOrder, visit: &mut F) {
        if w.len() == n {
            visit(w);
            return;
        }
        let nb = neighbourhood(d, w.len() as u32);
        for g in order.members(nb.partition.up) {
            w.push(g);
            rec(&nb.products[g.index()], w, n, order, visit);
            w.pop();
        }
    }
    rec(&ForestDiagram::identity(), &mut Word::new(), n, order, &mut visit);
}

/// One level of an explicit traversal stack.
#[derive(Debug, Clone)]
pub struct TraversalFrame {
    pub diagram: ForestDiagram,
    /// Generators that lengthen the prefix ending at this frame.
    pub up: GeneratorSet,
    /// `|d-|` of this prefix.
    pub down_count: usize,
}

/// Iterative lexicographic walk over geodesics of length at most `max_len`:
/// each prefix is produced before its extensions.
#[derive(Debug, Clone)]
pub struct GeodesicWalker {
    max_len: usize,
    word: Word,
    frames: Vec<TraversalFrame>,
    started: bool,
    done: bool,
}

impl GeodesicWalker {
    pub fn new(max_len: usize) -> Self {
        let identity = ForestDiagram::identity();
        let nb = neighbourhood(&identity, 0);
        GeodesicWalker {
            max_len,
            word: Word::new(),
            frames: vec![TraversalFrame { diagram: identity, up: nb.partition.up, down_count: 0 }],
            started: false,
            done: false,
        }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn frames(&self) -> &[TraversalFrame] {
        &self.frames
    }

    fn up_of_top(&self) -> GeneratorSet {
        if self.word.len() == self.max_len {
            GeneratorSet::EMPTY
        } else {
            self.frames.last().unwrap().up
        }
    }

    fn descend(&mut self, g: Generator) {
        let top = &self.frames.last().unwrap().diagram;
        let child = top.multiply(g);
        let nb = neighbourhood(&child, self.word.len() as u32 + 1);
        self.word.push(g);
        self.frames.push(TraversalFrame { diagram: child, up: nb.partition.up, down_count: nb.partition.down.len() });
    }

    /// Moves to the next geodesic; `false` once the order is exhausted.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if let Some(g) = self.up_of_top().iter().next() {
            self.descend(g);
            return true;
        }
        loop {
            let Some(x) = self.word.pop() else {
                self.done = true;
                return false;
            };
            self.frames.pop();
            let up = self.up_of_top();
            if let Some(y) = up.iter().find(|&y| y > x) {
                self.descend(y);
                return true;
            }
            if self.word.is_empty() {
                self.done = true;
                return false;
            }
        }
    }
}

impl Iterator for GeodesicWalker {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if !self.started {
            self.started = true;
            return Some(self.word.clone());
        }
        self.advance().then(|| self.word.clone())
    }
}

/// The lexicographic successor of the geodesic `w` among geodesics of length at most
/// `n`, or `None` when `w` is the last one.
pub fn next_geodesic(w: &Word, n: usize) -> Option<Word> {
    let mut prefixes = Vec::with_capacity(w.len() + 1);
    let mut d = ForestDiagram::identity();
    prefixes.push(d.clone());
    for &g in w.letters() {
        d = d.multiply(g);
        prefixes.push(d.clone());
    }
    let up_at = |k: usize, diagrams: &[ForestDiagram]| -> GeneratorSet {
        if k >= n {
            GeneratorSet::EMPTY
        } else {
            neighbourhood(&diagrams[k], k as u32).partition.up
        }
    };
    if let Some(x) = up_at(w.len(), &prefixes).iter().next() {
        let mut next = w.clone();
        next.push(x);
        return Some(next);
    }
    let mut word = w.clone();
    while let Some(x) = word.pop() {
        prefixes.pop();
        if let Some(y) = up_at(word.len(), &prefixes).iter().find(|&y| y > x) {
            word.push(y);
            return Some(word);
        }
    }
    None
}
