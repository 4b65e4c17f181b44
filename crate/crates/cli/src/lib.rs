//! Command-line driver for the growth-series engines.
//!
//! [`run`] parses arguments, executes one command and returns the process exit
//! code; `main` only wires it to the real standard streams.

use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;
use num_bigint::BigUint;
use thompson_growth::algorithm_a::{self, WalkConfig, WARN_LENGTH};
use thompson_growth::algorithm_b::{self, EnumerationConfig};
use thompson_growth::forest_core::{
    bfs_sphere_counts_with_budget, geodesic_length, WeightTable, DEFAULT_ELEMENT_BUDGET, DEFAULT_ORACLE_RADIUS,
};
use thompson_growth::series_analysis::{
    amplitude_fit, check_submultiplicative, fekete_bounds, golden_rate_for, golden_square, ratio_at, read_bfile,
    upper_bound_at, write_bfile, Decimal, Precision, MIN_FIT_TERMS,
};
use thompson_growth::{Error, GrowthSeries, SeriesKind, SeriesSource, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREEMENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_NOT_SUBMULTIPLICATIVE: i32 = 4;
pub const EXIT_IO: i32 = 5;

/// Rough per-element cost of the breadth-first oracle, used to turn a memory
/// budget into an element budget.
const ORACLE_BYTES_PER_ELEMENT: u64 = 256;

/// Values with more digits than this are abbreviated in table output.
const TABLE_DIGITS: usize = 24;

#[derive(Parser, Debug)]
#[command(name = "thompson-growth", version, about = "Growth series of Thompson's group F")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for the geodesic traversal (1 runs sequentially).
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,

    /// Refuse runs whose estimated working memory exceeds this many bytes.
    #[arg(long, global = true)]
    pub memory_budget: Option<u64>,

    /// Significant digits for roots and ratios.
    #[arg(long, global = true, default_value_t = 20)]
    pub precision: usize,

    /// Write results to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the geodesic length of a word over a, A, b, B (x0, x0^-1, x1, x1^-1).
    Length {
        /// The word, compact (`abAB`) or verbose (`x0 x1^-1`).
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Print f(n), and g(n) with --geodesics, for n = 0..=max-n.
    Count {
        #[command(flatten)]
        series: SeriesArgs,
        /// `table` prints "n f [g]", `csv` adds bounds, `bfile` is "n f".
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Cross-check the two algorithms and the breadth-first oracle.
    Validate {
        /// Last length checked by the geodesic traversal.
        #[arg(long, default_value_t = 12)]
        n_a: usize,
        /// Last length checked by the breadth-first oracle.
        #[arg(long, default_value_t = 8)]
        n_oracle: usize,
        /// Run the column transfer with W(L,R) = W(R,L) = 2.
        #[arg(long, hide = true)]
        corrupt_weights: bool,
    },
    /// Growth-rate bounds for a computed series or a b-file.
    Analyze {
        /// Read f from this b-file instead of computing it.
        #[arg(long, conflicts_with = "max_n")]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Method::B)]
        method: Method,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        prune: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Write a series as a b-file.
    Emit {
        #[command(flatten)]
        series: SeriesArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SeriesArgs {
    #[arg(long, value_enum, default_value_t = Method::B)]
    pub method: Method,
    /// Largest length n to count.
    #[arg(long)]
    pub max_n: usize,
    /// Also count geodesic words (traversal method only).
    #[arg(long)]
    pub geodesics: bool,
    /// Drop partial diagrams that cannot close within the weight limit.
    #[arg(long)]
    pub prune: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Geodesic traversal with exact rational weights.
    A,
    /// Column transfer over forest diagrams.
    B,
    /// Breadth-first search of the Cayley graph.
    Oracle,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Bfile,
}

/// A failed command and the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Disagreement(String),
    Resource(String),
    NotSubmultiplicative(String),
    Io(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Disagreement(_) | CliError::Internal(_) => EXIT_DISAGREEMENT,
            CliError::Resource(_) => EXIT_RESOURCE,
            CliError::NotSubmultiplicative(_) => EXIT_NOT_SUBMULTIPLICATIVE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m)
            | CliError::Disagreement(m)
            | CliError::Resource(m)
            | CliError::NotSubmultiplicative(m)
            | CliError::Io(m)
            | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let m = e.to_string();
        match e {
            Error::Parse(_) | Error::Precision { .. } | Error::BFile { .. } | Error::SeriesTooShort(_) => {
                CliError::Usage(m)
            }
            Error::ResourceLimit(_) => CliError::Resource(m),
            _ => CliError::Internal(m),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return e.exit_code();
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let precision = Precision::new(cli.precision)?;
    if cli.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let pool = if cli.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build()
            .map_err(|e| CliError::Internal(e.to_string()))?;
        Some(pool)
    } else {
        None
    };
    let ctx = Context { pool, memory_budget: cli.memory_budget, precision };

    let mut file;
    let out: &mut dyn Write = match &cli.out {
        Some(path) => {
            let f = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            file = BufWriter::new(f);
            &mut file
        }
        None => stdout,
    };

    match &cli.command {
        Command::Length { word } => cmd_length(word, out),
        Command::Count { series, format } => cmd_count(&ctx, series, *format, out),
        Command::Validate { n_a, n_oracle, corrupt_weights } => {
            cmd_validate(&ctx, *n_a, *n_oracle, *corrupt_weights, out)
        }
        Command::Analyze { input, method, max_n, prune, format } => {
            let f = match (input, max_n) {
                (Some(path), _) => {
                    let file = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    let values = read_bfile(BufReader::new(file))?;
                    GrowthSeries::new(values, SeriesKind::Elements, SeriesSource::File)
                }
                (None, Some(n)) => compute(&ctx, *method, *n, false, *prune, |_, _, _| Ok(()))?.0,
                (None, None) => return Err(CliError::Usage("analyze needs --input or --max-n".into())),
            };
            cmd_analyze(&ctx, &f, *format, out)
        }
        Command::Emit { series } => {
            let (f, g) = compute(&ctx, series.method, series.max_n, series.geodesics, series.prune, |_, _, _| Ok(()))?;
            let values = if series.geodesics { g.expect("requested").values } else { f.values };
            write_bfile(&values, &mut *out)?;
            Ok(())
        }
    }?;
    out.flush()?;
    Ok(())
}

struct Context {
    /// Present when more than one thread was requested.
    pool: Option<rayon::ThreadPool>,
    memory_budget: Option<u64>,
    precision: Precision,
}

impl Context {
    fn traverse(&self, max_n: usize) -> CliResult<(GrowthSeries, GrowthSeries)> {
        let run = |config: &WalkConfig| algorithm_a::growth_and_geodesic_series(max_n, config);
        let result = match &self.pool {
            Some(pool) => pool.install(|| run(&WalkConfig::parallel())),
            None => run(&WalkConfig::default()),
        };
        Ok(result?)
    }
}

fn cmd_length(word: &str, out: &mut dyn Write) -> CliResult<()> {
    let w: Word = word.parse()?;
    writeln!(out, "{}", geodesic_length(&w))?;
    Ok(())
}

/// Computes f (and g if asked) for `n = 0..=max_n`. `on_value` sees each
/// `(n, f(n), g(n))` in order; the column transfer calls it as soon as a level
/// is final.
fn compute<F>(
    ctx: &Context,
    method: Method,
    max_n: usize,
    geodesics: bool,
    prune: bool,
    mut on_value: F,
) -> CliResult<(GrowthSeries, Option<GrowthSeries>)>
where
    F: FnMut(usize, &BigUint, Option<&BigUint>) -> CliResult<()>,
{
    if geodesics && method != Method::A {
        return Err(CliError::Usage("--geodesics needs --method a".into()));
    }
    if prune && method != Method::B {
        return Err(CliError::Usage("--prune applies to --method b only".into()));
    }
    match method {
        Method::A => {
            if max_n > WARN_LENGTH {
                warn!("the geodesic traversal takes exponential time; n = {max_n} may not finish");
            }
            let (f, g) = ctx.traverse(max_n)?;
            for n in 0..f.len() {
                on_value(n, &f.values[n], geodesics.then(|| &g.values[n]))?;
            }
            Ok((f, geodesics.then_some(g)))
        }
        Method::B => {
            let needed = algorithm_b::estimated_peak_bytes(max_n, prune);
            if let Some(budget) = ctx.memory_budget {
                if needed > budget {
                    return Err(CliError::Resource(format!(
                        "column transfer to n = {max_n} needs about {needed} bytes, budget is {budget}"
                    )));
                }
            }
            let config = if prune { EnumerationConfig::pruned() } else { EnumerationConfig::default() };
            let mut failure = None;
            let f = algorithm_b::growth_series_streaming(max_n, &config, |n, v| {
                if failure.is_none() {
                    if let Err(e) = on_value(n, v, None) {
                        failure = Some(e);
                    }
                }
            })?;
            match failure {
                Some(e) => Err(e),
                None => Ok((f, None)),
            }
        }
        Method::Oracle => {
            if max_n > DEFAULT_ORACLE_RADIUS {
                warn!("the breadth-first oracle stores every element; n = {max_n} is beyond its intended range");
            }
            let budget = match ctx.memory_budget {
                Some(bytes) => usize::try_from(bytes / ORACLE_BYTES_PER_ELEMENT).unwrap_or(usize::MAX),
                None => DEFAULT_ELEMENT_BUDGET,
            };
            let f = bfs_sphere_counts_with_budget(max_n, budget)?;
            for n in 0..f.len() {
                on_value(n, &f.values[n], None)?;
            }
            Ok((f, None))
        }
    }
}

fn cmd_count(ctx: &Context, args: &SeriesArgs, format: Format, out: &mut dyn Write) -> CliResult<()> {
    if format == Format::Bfile && args.geodesics {
        return Err(CliError::Usage("a b-file holds one series; use emit --geodesics for g".into()));
    }
    if format == Format::Csv {
        let g = if args.geodesics { ",g" } else { "" };
        writeln!(out, "n,f,fekete_upper,ratio{g}")?;
    }
    let precision = ctx.precision;
    let mut prev: Option<BigUint> = None;
    compute(ctx, args.method, args.max_n, args.geodesics, args.prune, |n, f, g| {
        match format {
            Format::Table | Format::Bfile => match g {
                Some(g) => writeln!(out, "{n} {f} {g}")?,
                None => writeln!(out, "{n} {f}")?,
            },
            Format::Csv => {
                let upper = if n == 0 { String::new() } else { upper_bound_at(f, n, precision).to_string() };
                let ratio = match &prev {
                    Some(p) if *p != BigUint::ZERO => ratio_at(f, p, precision).to_string(),
                    _ => String::new(),
                };
                let g = g.map(|g| format!(",{g}")).unwrap_or_default();
                writeln!(out, "{n},{f},{upper},{ratio}{g}")?;
            }
        }
        out.flush()?;
        prev = Some(f.clone());
        Ok(())
    })?;
    Ok(())
}

/// Standard weights with W(L,R) and W(R,L) raised from 1 to 2.
fn corrupted_weights() -> WeightTable {
    let mut rows = WeightTable::standard().rows();
    rows[2][3] = 2;
    rows[3][2] = 2;
    WeightTable::from_rows(rows)
}

fn cmd_validate(ctx: &Context, n_a: usize, n_oracle: usize, corrupt: bool, out: &mut dyn Write) -> CliResult<()> {
    let n_b = n_a.max(n_oracle);
    let config = EnumerationConfig {
        weights: if corrupt { corrupted_weights() } else { WeightTable::standard() },
        ..EnumerationConfig::default()
    };
    let b = algorithm_b::growth_series_streaming(n_b, &config, |_, _| {})?;
    let (a, _) = ctx.traverse(n_a)?;
    let oracle = bfs_sphere_counts_with_budget(n_oracle, DEFAULT_ELEMENT_BUDGET)?;

    let columns = [("A", &a), ("B", &b), ("oracle", &oracle)];
    writeln!(out, "n A B oracle agree")?;
    let mut first: Option<String> = None;
    for n in 0..=n_b {
        let present: Vec<(&str, &BigUint)> =
            columns.iter().filter_map(|(name, s)| s.get(n).map(|v| (*name, v))).collect();
        let agree = present.windows(2).all(|w| w[0].1 == w[1].1);
        let cell = |s: &GrowthSeries| s.get(n).map_or_else(|| "-".to_string(), |v| v.to_string());
        writeln!(out, "{n} {} {} {} {}", cell(&a), cell(&b), cell(&oracle), if agree { "yes" } else { "NO" })?;
        if !agree && first.is_none() {
            let (m0, v0) = present[0];
            let (m1, v1) = present.iter().copied().find(|(_, v)| *v != v0).expect("some value differs");
            first = Some(format!("first disagreement at n = {n}: {m1} gives {v1}, {m0} gives {v0}"));
        }
    }
    match first {
        Some(m) => {
            writeln!(out, "{m}")?;
            Err(CliError::Disagreement(m))
        }
        None => {
            writeln!(out, "all methods agree")?;
            Ok(())
        }
    }
}

fn abbreviate(v: &BigUint) -> String {
    let s = v.to_string();
    if s.len() <= TABLE_DIGITS {
        s
    } else {
        format!("{}...{} ({} digits)", &s[..4], &s[s.len() - 4..], s.len())
    }
}

fn cmd_analyze(ctx: &Context, f: &GrowthSeries, format: Format, out: &mut dyn Write) -> CliResult<()> {
    if let Some(&(n, m)) = check_submultiplicative(f).first() {
        return Err(CliError::NotSubmultiplicative(format!(
            "f({}) = {} exceeds f({n}) f({m}) = {}; not a growth series",
            n + m,
            f.values[n + m],
            &f.values[n] * &f.values[m]
        )));
    }
    let precision = ctx.precision;
    let rows = fekete_bounds(f, precision)?;
    let opt = |d: &Option<Decimal>| d.as_ref().map(ToString::to_string).unwrap_or_default();
    match format {
        Format::Csv => {
            writeln!(out, "n,f,fekete_upper,ratio")?;
            for r in &rows {
                writeln!(out, "{},{},{},{}", r.n, f.values[r.n], r.upper, opt(&r.ratio))?;
            }
            return Ok(());
        }
        Format::Bfile => {
            write_bfile(&f.values, &mut *out)?;
            return Ok(());
        }
        Format::Table => {}
    }
    writeln!(out, "n f(n) f(n)^(1/n) f(n)/f(n-1) (f(2n)/f(n))^(1/n)")?;
    for r in &rows {
        let doubling = r.doubling.as_ref().map_or_else(|| "-".to_string(), ToString::to_string);
        let ratio = r.ratio.as_ref().map_or_else(|| "-".to_string(), ToString::to_string);
        writeln!(out, "{} {} {} {} {}", r.n, abbreviate(&f.values[r.n]), r.upper, ratio, doubling)?;
    }
    let scale = precision.digits().saturating_sub(1) as u32;
    writeln!(out, "lower bound (3+sqrt5)/2 = {}", golden_square(scale))?;
    if let Some(best) = rows.iter().min_by(|x, y| x.upper.cmp(&y.upper)) {
        writeln!(out, "best upper bound f({})^(1/{}) = {}", best.n, best.n, best.upper)?;
    }
    if f.len() >= MIN_FIT_TERMS {
        let n_max = f.len() - 1;
        let rate = golden_rate_for(n_max, precision);
        let fit = amplitude_fit(f, &rate, precision)?;
        writeln!(
            out,
            "amplitude estimate f(n)/((3+sqrt5)/2)^n at n = {}: {} (drift over last {} terms: {})",
            fit.n,
            fit.value,
            fit.trend.len(),
            fit.drift()
        )?;
    }
    Ok(())
}
