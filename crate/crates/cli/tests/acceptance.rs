//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Set `THOMPSON_EXTENDED=1` to add the long n = 1500 run.

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use thompson_growth::algorithm_a::{enumerate_geodesics, tally_spheres, ExactRational, SphereTally, WalkConfig};
use thompson_growth::algorithm_b::{
    self, creates_common_caret, enumerate_padded_with, transitions, EnumerationConfig, HalfState, Side,
};
use thompson_growth::forest_core::{
    bfs_ball, bfs_sphere_counts, column_weight, geodesic_length, BinaryTree, WeightTable, DEFAULT_ELEMENT_BUDGET,
};
use thompson_growth::geodesic_classifier::neighbourhood;
use thompson_growth::series_analysis::{
    amplitude_fit, doubling_estimates, fekete_bounds, golden_rate_for, golden_square, ratio_at, upper_bound_at,
    Decimal, Precision,
};
use thompson_growth::tree_codec::{count_trees, decode_word, encode_tree, CodeWord};
use thompson_growth::{ForestDiagram, GapLabel, GrowthSeries};

const F: [u64; 23] = [
    1, 4, 12, 36, 108, 314, 906, 2576, 7280, 20352, 56664, 156570, 431238, 1180968, 3225940, 8773036, 23809148,
    64388402, 173829458, 467950860, 1257901236, 3373450744, 9035758992,
];
const G: [u64; 15] = [1, 4, 12, 36, 108, 324, 952, 2800, 8132, 23608, 67884, 195132, 556932, 1588836, 4507524];

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn series_b() -> &'static GrowthSeries {
    static S: OnceLock<GrowthSeries> = OnceLock::new();
    S.get_or_init(|| algorithm_b::growth_series(500).expect("column transfer to 500"))
}

fn tally_a() -> &'static SphereTally {
    static T: OnceLock<SphereTally> = OnceLock::new();
    T.get_or_init(|| tally_spheres(14, &WalkConfig::default()))
}

fn digits_check(f: &GrowthSeries, n: usize, len: usize, prefix: &str, suffix: &str) -> Result<(), String> {
    let s = f.values[n].to_string();
    ensure(
        s.len() == len && s.starts_with(prefix) && s.ends_with(suffix),
        format!("f({n}) = {}...{} with {} digits", &s[..4], &s[s.len() - 4..], s.len()),
    )
}

fn c1_elements() -> Check {
    let start = Instant::now();
    let b = algorithm_b::growth_series(22).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    for (n, &want) in F.iter().enumerate() {
        ensure(b.values[n] == big(want), format!("B: f({n}) = {} != {want}", b.values[n]))?;
    }
    ensure(elapsed < Duration::from_secs(5), format!("B took {elapsed:?}"))?;
    let t = tally_a();
    for (n, &want) in F.iter().enumerate().take(15) {
        let got = t.sphere(n).map_err(|e| e.to_string())?;
        ensure(got == big(want), format!("A: f({n}) = {got} != {want}"))?;
    }
    Ok(format!("B f(0..22) in {elapsed:.2?}; A f(0..14) match, f(14) = {}", F[14]))
}

fn c2_geodesics() -> Check {
    let t = tally_a();
    for (n, &want) in G.iter().enumerate() {
        ensure(t.geodesics(n) == want, format!("g({n}) = {} != {want}", t.geodesics(n)))?;
    }
    Ok(format!("g(0..14) match, g(14) = {}", G[14]))
}

fn c3_deep() -> Check {
    let f = series_b();
    ensure(f.values[50] == "6015840076078706884412".parse().unwrap(), format!("f(50) = {}", f.values[50]))?;
    digits_check(f, 100, 43, "5023", "5868")?;
    digits_check(f, 200, 85, "3158", "3328")?;
    digits_check(f, 500, 210, "7798", "8648")?;
    Ok("f(50) exact; f(100), f(200), f(500) digit counts, prefixes and suffixes match".into())
}

fn c4_bounds() -> Check {
    let f = series_b();
    let p = |d| Precision::new(d).unwrap();
    let at22 = upper_bound_at(&f.values[22], 22, p(8)).to_string();
    ensure(at22 == "2.8349398", format!("f(22)^(1/22) = {at22}"))?;
    let r200 = ratio_at(&f.values[200], &f.values[199], p(7)).to_string();
    ensure(r200 == "2.618034", format!("ratio at 200 = {r200}"))?;
    let r500 = ratio_at(&f.values[500], &f.values[499], p(17)).to_string();
    ensure(r500 == "2.6180339887498949", format!("ratio at 500 = {r500}"))?;
    let lower: Decimal = "2.6180339887".parse().unwrap();
    let rows = fekete_bounds(f, Precision::DEFAULT).map_err(|e| e.to_string())?;
    ensure(rows.len() == 500, "one bound per n >= 1")?;
    if let Some(r) = rows.iter().find(|r| r.upper <= lower) {
        return Err(format!("upper bound at {} is {}", r.n, r.upper));
    }
    Ok(format!("22: {at22}; ratio 200: {r200}; ratio 500: {r500}; 500 bounds above 2.6180339887"))
}

fn c5_oracle() -> Check {
    let start = Instant::now();
    let bfs = bfs_sphere_counts(10).map_err(|e| e.to_string())?;
    for (n, &want) in F.iter().enumerate().take(11) {
        ensure(bfs.values[n] == big(want), format!("BFS f({n}) = {}", bfs.values[n]))?;
    }
    let ball = bfs_ball(8, DEFAULT_ELEMENT_BUDGET).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for (n, sphere) in ball.spheres.iter().enumerate() {
        for e in sphere {
            let len = geodesic_length(&e.witness);
            ensure(len as usize == n, format!("{} has length {len}, distance {n}", e.witness))?;
            ensure(e.diagram.weight() as usize == n, "diagram weight differs from distance")?;
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("f(0..10) match; {checked} elements of the radius-8 ball certified in {elapsed:.2?}"))
}

fn c6_integrality() -> Check {
    let t = tally_a();
    for n in 0..=14 {
        let r = t.sphere_rational(n);
        ensure(r.is_integer(), format!("n = {n}: accumulator is {r}"))?;
    }
    for (n, &size) in F.iter().enumerate().take(7).skip(1) {
        let mut sums: HashMap<Vec<u8>, ExactRational> = HashMap::new();
        enumerate_geodesics(n, |w| {
            let mut d = ForestDiagram::identity();
            let mut weight = ExactRational::one();
            for (k, &g) in w.letters().iter().enumerate() {
                d = d.multiply(g);
                let down = neighbourhood(&d, k as u32 + 1).partition.down.len();
                weight = weight * ExactRational::reciprocal_of(down as u64);
            }
            *sums.entry(d.canonical_key()).or_insert_with(ExactRational::zero) += weight;
        });
        ensure(sums.len() as u64 == size, format!("n = {n}: {} elements", sums.len()))?;
        ensure(sums.values().all(|s| *s == ExactRational::one()), format!("n = {n}: some sum is not 1"))?;
    }
    Ok("denominator 1 for n <= 14; every element sums to 1 for n <= 6".into())
}

fn c7_codec() -> Check {
    let mut per_size = Vec::new();
    for c in 0..=7 {
        let trees = BinaryTree::enumerate(c);
        for t in &trees {
            let w = encode_tree(t);
            let back = decode_word(&w).map_err(|e| format!("{w}: {e}"))?;
            ensure(back == *t, format!("{w} does not round-trip"))?;
        }
        per_size.push(trees.len() as u64);
    }
    ensure(per_size[7] == 429, format!("{} trees with 7 carets", per_size[7]))?;
    let counted: Vec<u64> = count_trees(7).iter().map(|v| v.try_into().unwrap()).collect();
    ensure(counted == [1, 1, 2, 5, 14, 42, 132], format!("count_trees(1..7) = {counted:?}"))?;
    ensure(counted[..] == per_size[..7], format!("exhaustive {per_size:?}"))?;
    let word: CodeWord = "nInNiInNnIiI".parse().map_err(|e| format!("{e}"))?;
    let tree = decode_word(&word).map_err(|e| e.to_string())?;
    ensure(tree.caret_count() == 6, format!("{} carets", tree.caret_count()))?;
    ensure(encode_tree(&tree) == word, "figure word does not re-encode")?;
    Ok(format!("round trip over {} trees; count_trees(1..7) = {counted:?}", per_size.iter().sum::<u64>()))
}

fn c8_transitions() -> Check {
    use GapLabel::*;
    let hs = |l, s, e| HalfState::new(l, s, e).unwrap();
    let count = |s: HalfState| transitions(s).unwrap().len();
    let cases = [
        (hs(L, Side::Left, 0), 7),
        (hs(R, Side::Right, 0), 2),
        (hs(X, Side::Right, 0), 2),
        (hs(I, Side::Left, 0), 3),
        (hs(I, Side::Right, 0), 4),
    ];
    for (s, want) in cases {
        ensure(count(s) == want, format!("{s} has {} successors", count(s)))?;
    }
    let mut states = vec![hs(L, Side::Left, 0), hs(R, Side::Right, 0), hs(X, Side::Right, 0)];
    for h in 0..=6 {
        for side in [Side::Left, Side::Right] {
            for label in [I, N] {
                if let Ok(s) = HalfState::new(label, side, h) {
                    states.push(s);
                }
            }
        }
    }
    for &s in &states {
        if s.excess > 0 {
            ensure(count(s) == 4, format!("{s} has {} successors", count(s)))?;
        }
        if s.label == R {
            ensure(transitions(s).unwrap().iter().all(|t| t.label != I), format!("{s} reaches I"))?;
        }
    }
    // Label quadruples (old top, old bottom, new top, new bottom) over reachable successor pairs.
    let mut rejected = BTreeSet::new();
    for &t in &states {
        for &b in &states {
            for t2 in transitions(t).unwrap() {
                for b2 in transitions(b).unwrap() {
                    if creates_common_caret(t.label, b.label, t2.label, b2.label) {
                        rejected.insert((t.label.index(), b.label.index(), t2.label.index(), b2.label.index()));
                    }
                }
            }
        }
    }
    let want: BTreeSet<_> =
        [L, N, X].iter().flat_map(|&a| [L, N, X].map(move |b| (a.index(), b.index(), I.index(), I.index()))).collect();
    ensure(rejected == want, format!("rejected label pairs {rejected:?}"))?;
    for a in GapLabel::ALL {
        for b in GapLabel::ALL {
            let w = column_weight(a, b);
            ensure((1..=4).contains(&w), format!("W({a:?},{b:?}) = {w}"))?;
        }
    }
    let (_, stats) = enumerate_padded_with(60, &EnumerationConfig::default(), |_, _| {}).map_err(|e| e.to_string())?;
    ensure(stats.min_step == 1 && stats.max_step == 4, format!("steps {}..{}", stats.min_step, stats.max_step))?;
    ensure(WeightTable::standard().is_symmetric(), "weight table is not symmetric")?;
    Ok("cardinalities 7/2/2/3/4/4; no R->I; 9 rejected pairs; writes in [n+1, n+4]; symmetric".into())
}

fn c9_asymptotics() -> Check {
    let f = series_b();
    let head = GrowthSeries::new(f.values[..=300].to_vec(), f.kind, f.source);
    let p = Precision::DEFAULT;
    let fit = amplitude_fit(&head, &golden_rate_for(300, p), p).map_err(|e| e.to_string())?;
    let a = fit.value.to_f64();
    ensure((a / 8.02374 - 1.0).abs() < 0.01, format!("amplitude {}", fit.value))?;
    let doubling = doubling_estimates(f, p).map_err(|e| e.to_string())?;
    let (_, d100) = doubling.iter().find(|(m, _)| *m == 100).ok_or("no doubling estimate at 100")?;
    let gap = d100.abs_diff(&golden_square(10)).to_f64();
    ensure(gap < 1e-3, format!("doubling at 100 = {d100}"))?;
    Ok(format!("amplitude {} at 300; doubling at 100 = {d100}", fit.value))
}

fn c10_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let once = |name: &str| -> Result<Vec<u8>, String> {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_thompson-growth"))
            .args(["count", "--method", "b", "--max-n", "50", "--format", "bfile", "--out"])
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), format!("exit {status}"))?;
        std::fs::read(&path).map_err(|e| e.to_string())
    };
    let first = once("a.txt")?;
    ensure(first == once("b.txt")?, "the two runs differ")?;
    let text = String::from_utf8(first).map_err(|e| e.to_string())?;
    ensure(text.ends_with('\n') && !text.ends_with("\n\n"), "bad final newline")?;
    let lines: Vec<&str> = text.split_terminator('\n').collect();
    ensure(lines.len() == 51, format!("{} lines", lines.len()))?;
    for (n, line) in lines.iter().enumerate() {
        let (idx, val) = line.split_once(' ').ok_or(format!("line {n}: {line:?}"))?;
        ensure(idx == n.to_string(), format!("line {n} has index {idx}"))?;
        ensure(!val.is_empty() && val.bytes().all(|b| b.is_ascii_digit()), format!("line {n}: {line:?}"))?;
        ensure(val == "0" || !val.starts_with('0'), format!("line {n}: leading zero"))?;
    }
    ensure(lines[50] == "50 6015840076078706884412", lines[50].to_string())?;
    Ok("two runs byte-identical; 51 lines of \"n value\\n\"".into())
}

fn extended() -> Check {
    let f = algorithm_b::growth_series_streaming(1500, &EnumerationConfig::pruned(), |_, _| {})
        .map_err(|e| e.to_string())?;
    digits_check(&f, 1500, 628, "7367", "9566")?;
    let upper = upper_bound_at(&f.values[1500], 1500, Precision::new(6).unwrap()).to_string();
    ensure(upper.starts_with("2.62167"), format!("f(1500)^(1/1500) = {upper}"))?;
    Ok(format!("f(1500) has 628 digits; upper bound {upper}"))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 table reproduction, elements", c1_elements),
        ("2 table reproduction, geodesics", c2_geodesics),
        ("3 deep series", c3_deep),
        ("4 bounds and ratios", c4_bounds),
        ("5 oracle equivalence", c5_oracle),
        ("6 integrality", c6_integrality),
        ("7 codec", c7_codec),
        ("8 transition structure", c8_transitions),
        ("9 asymptotic estimate", c9_asymptotics),
        ("10 determinism and format", c10_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} [{secs:.1}s]");
            }
        }
    }
    if std::env::var_os("THOMPSON_EXTENDED").is_some() {
        match extended() {
            Ok(detail) => println!("PASS extended n = 1500: {detail}"),
            Err(why) => println!("FAIL extended n = 1500 (not gating): {why}"),
        }
    } else {
        println!("SKIP extended n = 1500 (set THOMPSON_EXTENDED=1)");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
