//! Growth-rate bounds and estimates from an exact growth series.
//!
//! Sphere sizes are submultiplicative, `f(n + m) <= f(n) f(m)`, so by Fekete's
//! lemma every `f(n)^(1/n)` bounds the growth rate from above and the sequence
//! decreases to it. Roots are extracted from exact integers and truncated: the
//! printed digits `d` satisfy `d^n <= f(n) < (d + ulp)^n`.

mod bfile;
mod decimal;

pub use bfile::{read_bfile, to_bfile_string, write_bfile};
pub use decimal::{
    golden_square, is_certified_root, nth_root_truncated, root_of_ratio_truncated, Decimal, Precision,
    DEFAULT_PRECISION_CAP,
};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::series::GrowthSeries;

/// Fewest terms accepted by [`amplitude_fit`].
pub const MIN_FIT_TERMS: usize = 50;

/// Number of trailing indices reported as the amplitude trend.
pub const FIT_TREND_LEN: usize = 10;

/// Index pairs `(n, m)`, `1 <= n <= m`, with `f(n + m) > f(n) f(m)`.
pub fn check_submultiplicative(f: &GrowthSeries) -> Vec<(usize, usize)> {
    let v = &f.values;
    let mut bad = Vec::new();
    for n in 1..v.len() {
        for m in n..v.len() - n {
            if v[n + m] > &v[n] * &v[m] {
                bad.push((n, m));
            }
        }
    }
    bad
}

/// One row of the bounds table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub n: usize,
    /// `f(n)^(1/n)`, truncated.
    pub upper: Decimal,
    /// `(3 + sqrt 5) / 2`, truncated.
    pub lower: Decimal,
    /// `f(n) / f(n - 1)`, truncated.
    pub ratio: Option<Decimal>,
    /// `(f(2n) / f(n))^(1/n)`, truncated, when `f(2n)` is available.
    pub doubling: Option<Decimal>,
}

fn root_to_precision(num: &BigUint, den: &BigUint, n: u32, precision: Precision) -> Decimal {
    let int_part = root_of_ratio_truncated(num, den, n, 0).trunc_abs();
    root_of_ratio_truncated(num, den, n, precision.fraction_digits(&int_part))
}

fn ratio_to_precision(num: &BigUint, den: &BigUint, precision: Precision) -> Decimal {
    Decimal::truncated_ratio(num, den, precision.fraction_digits(&(num / den)))
}

/// `f(n)^(1/n)` truncated to `precision` significant digits.
pub fn upper_bound_at(f_n: &BigUint, n: usize, precision: Precision) -> Decimal {
    root_to_precision(f_n, &BigUint::one(), n as u32, precision)
}

/// `f(n) / f(n - 1)` truncated to `precision` significant digits.
pub fn ratio_at(f_n: &BigUint, f_prev: &BigUint, precision: Precision) -> Decimal {
    ratio_to_precision(f_n, f_prev, precision)
}

/// Upper bounds `f(n)^(1/n)` for every `n >= 1` with `f(n) > 0`, together with
/// the ratio and doubling estimates for the same index.
pub fn fekete_bounds(f: &GrowthSeries, precision: Precision) -> Result<Vec<BoundsReport>> {
    let v = &f.values;
    let lower = golden_square(precision.digits().saturating_sub(1) as u32);
    let mut rows = Vec::new();
    for n in 1..v.len() {
        if v[n].is_zero() {
            continue;
        }
        let upper = upper_bound_at(&v[n], n, precision);
        let ratio = (!v[n - 1].is_zero()).then(|| ratio_at(&v[n], &v[n - 1], precision));
        let doubling = v.get(2 * n).map(|w| root_to_precision(w, &v[n], n as u32, precision));
        rows.push(BoundsReport { n, upper, lower: lower.clone(), ratio, doubling });
    }
    Ok(rows)
}

/// A successive ratio and its distance from `(3 + sqrt 5) / 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    pub n: usize,
    pub ratio: Decimal,
    pub distance: Decimal,
}

/// `f(n) / f(n - 1)` for `n >= 1`.
pub fn successive_ratios(f: &GrowthSeries, precision: Precision) -> Result<Vec<RatioReport>> {
    let v = &f.values;
    if v.len() < 2 {
        return Err(Error::SeriesTooShort(format!("ratios need 2 terms, have {}", v.len())));
    }
    let mut out = Vec::with_capacity(v.len() - 1);
    for n in 1..v.len() {
        if v[n - 1].is_zero() {
            continue;
        }
        let ratio = ratio_to_precision(&v[n], &v[n - 1], precision);
        let distance = ratio.abs_diff(&golden_square(ratio.scale() + 2));
        out.push(RatioReport { n, ratio, distance });
    }
    Ok(out)
}

/// `(f(2m) / f(m))^(1/m)` for every `m >= 1` with `f(2m)` available.
pub fn doubling_estimates(f: &GrowthSeries, precision: Precision) -> Result<Vec<(usize, Decimal)>> {
    let v = &f.values;
    if v.len() < 3 {
        return Err(Error::SeriesTooShort(format!("doubling needs 3 terms, have {}", v.len())));
    }
    Ok((1..=(v.len() - 1) / 2)
        .filter(|&m| !v[m].is_zero())
        .map(|m| (m, root_to_precision(&v[2 * m], &v[m], m as u32, precision)))
        .collect())
}

/// Result of [`amplitude_fit`]; an estimate, not a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmplitudeFit {
    /// Index of the last term used.
    pub n: usize,
    /// `f(n) / rate^n`.
    pub value: Decimal,
    /// `(k, f(k) / rate^k)` for the last few indices.
    pub trend: Vec<(usize, Decimal)>,
}

impl AmplitudeFit {
    /// Spread of the trend values, a rough stability indicator.
    pub fn drift(&self) -> Decimal {
        let first = &self.trend.first().expect("trend is nonempty").1;
        first.abs_diff(&self.value)
    }
}

fn amplitude_at(fk: &BigUint, k: usize, rate: &Decimal, precision: Precision) -> Decimal {
    let m = rate.mantissa().magnitude();
    let den: BigUint = Pow::pow(m, k as u32);
    let num = fk * decimal::pow10(rate.scale() * k as u32);
    ratio_to_precision(&num, &den, precision)
}

/// Evaluates `f(n) / rate^n` at the last index, with the preceding values as a trend.
pub fn amplitude_fit(f: &GrowthSeries, rate: &Decimal, precision: Precision) -> Result<AmplitudeFit> {
    let v = &f.values;
    if v.len() < MIN_FIT_TERMS {
        return Err(Error::SeriesTooShort(format!("amplitude fit needs {MIN_FIT_TERMS} terms, have {}", v.len())));
    }
    if *rate <= Decimal::from_integer(1) {
        return Err(Error::Parse(format!("growth rate {rate} must exceed 1")));
    }
    let n = v.len() - 1;
    let trend: Vec<_> = (n + 1 - FIT_TREND_LEN..=n).map(|k| (k, amplitude_at(&v[k], k, rate, precision))).collect();
    let value = trend.last().expect("nonempty").1.clone();
    Ok(AmplitudeFit { n, value, trend })
}

/// `(3 + sqrt 5) / 2` accurate enough that raising it to `n_max` keeps
/// `precision` significant digits.
pub fn golden_rate_for(n_max: usize, precision: Precision) -> Decimal {
    let guard = n_max.to_string().len() + 5;
    golden_square((precision.digits() + guard) as u32)
}

/// Coefficients of `(1 - 3z + z^2) F(z)` and the ratios of consecutive ones.
/// With the leading singularity removed, what remains exposes the next one.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionDiagnostic {
    pub coefficients: Vec<BigInt>,
    pub ratios: Vec<Option<f64>>,
}

pub fn correction_diagnostic(f: &GrowthSeries) -> CorrectionDiagnostic {
    let v: Vec<BigInt> = f.values.iter().map(|x| BigInt::from(x.clone())).collect();
    let coefficients: Vec<BigInt> = (0..v.len())
        .map(|n| {
            let mut c = v[n].clone();
            if n >= 1 {
                c -= &v[n - 1] * 3;
            }
            if n >= 2 {
                c += &v[n - 2];
            }
            c
        })
        .collect();
    let ratios = (0..coefficients.len())
        .map(|n| {
            if n == 0 || coefficients[n - 1].is_zero() {
                return None;
            }
            let a = coefficients[n].to_f64()?;
            let b = coefficients[n - 1].to_f64()?;
            Some((a / b).abs())
        })
        .collect();
    CorrectionDiagnostic { coefficients, ratios }
}
