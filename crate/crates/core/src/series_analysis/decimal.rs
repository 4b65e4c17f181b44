use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest precision accepted unless a caller raises the cap.
pub const DEFAULT_PRECISION_CAP: usize = 5000;

/// Number of significant decimal digits requested for an analysis value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision(usize);

impl Precision {
    pub const DEFAULT: Precision = Precision(20);

    pub fn new(digits: usize) -> Result<Self> {
        Self::with_cap(digits, DEFAULT_PRECISION_CAP)
    }

    pub fn with_cap(digits: usize, cap: usize) -> Result<Self> {
        if digits == 0 || digits > cap {
            return Err(Error::Precision { requested: digits, cap });
        }
        Ok(Precision(digits))
    }

    pub fn digits(self) -> usize {
        self.0
    }

    /// Digits after the point that give `self` significant digits for a value
    /// whose integer part is `int_part`.
    pub(crate) fn fraction_digits(self, int_part: &BigUint) -> u32 {
        let int_digits = if int_part.is_zero() { 0 } else { int_part.to_string().len() };
        self.0.saturating_sub(int_digits) as u32
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Fixed-point decimal `mantissa / 10^scale`.
#[derive(Debug, Clone)]
pub struct Decimal {
    mantissa: BigInt,
    scale: u32,
}

pub(crate) fn pow10(k: u32) -> BigUint {
    BigUint::from(10u32).pow(k)
}

impl Decimal {
    pub fn new(mantissa: BigInt, scale: u32) -> Self {
        Decimal { mantissa, scale }
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        Decimal { mantissa: v.into(), scale: 0 }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// One unit in the last place.
    pub fn ulp(&self) -> Decimal {
        Decimal::new(BigInt::one(), self.scale)
    }

    /// Same value with `scale` fraction digits, truncating toward zero.
    pub fn with_scale(&self, scale: u32) -> Decimal {
        let mantissa = match scale.cmp(&self.scale) {
            Ordering::Equal => self.mantissa.clone(),
            Ordering::Greater => &self.mantissa * BigInt::from(pow10(scale - self.scale)),
            Ordering::Less => &self.mantissa / BigInt::from(pow10(self.scale - scale)),
        };
        Decimal { mantissa, scale }
    }

    /// `floor(num / den)` to `scale` fraction digits.
    pub fn truncated_ratio(num: &BigUint, den: &BigUint, scale: u32) -> Decimal {
        let m = (num * pow10(scale)) / den;
        Decimal::new(BigInt::from(m), scale)
    }

    pub fn abs_diff(&self, other: &Decimal) -> Decimal {
        let scale = self.scale.max(other.scale);
        let d = self.with_scale(scale).mantissa - other.with_scale(scale).mantissa;
        Decimal::new(d.abs(), scale)
    }

    pub fn add(&self, other: &Decimal) -> Decimal {
        let scale = self.scale.max(other.scale);
        Decimal::new(self.with_scale(scale).mantissa + other.with_scale(scale).mantissa, scale)
    }

    pub fn to_f64(&self) -> f64 {
        let s = self.to_string();
        s.parse().unwrap_or_else(|_| self.mantissa.to_f64().unwrap_or(f64::NAN))
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.sign() == Sign::Minus
    }

    /// Integer part of the absolute value.
    pub fn trunc_abs(&self) -> BigUint {
        self.mantissa.magnitude() / pow10(self.scale)
    }
}

impl PartialEq for Decimal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Decimal {}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Decimal {
    fn cmp(&self, other: &Self) -> Ordering {
        let scale = self.scale.max(other.scale);
        self.with_scale(scale).mantissa.cmp(&other.with_scale(scale).mantissa)
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.mantissa.magnitude().to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        let scale = self.scale as usize;
        if scale == 0 {
            return write!(f, "{sign}{digits}");
        }
        let padded = format!("{digits:0>width$}", width = scale + 1);
        let (int, frac) = padded.split_at(padded.len() - scale);
        write!(f, "{sign}{int}.{frac}")
    }
}

impl FromStr for Decimal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a decimal number: {s:?}"));
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        let mut mantissa: BigInt =
            if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
        if neg {
            mantissa = -mantissa;
        }
        Ok(Decimal::new(mantissa, frac.len() as u32))
    }
}

/// `v^(1/n)` truncated to `scale` fraction digits. The result `d` satisfies
/// `d^n <= v < (d + ulp)^n`.
pub fn nth_root_truncated(v: &BigUint, n: u32, scale: u32) -> Decimal {
    assert!(n >= 1, "root index must be positive");
    let shifted = v * pow10(scale * n);
    Decimal::new(BigInt::from(shifted.nth_root(n)), scale)
}

/// `(num / den)^(1/n)` truncated to `scale` fraction digits.
pub fn root_of_ratio_truncated(num: &BigUint, den: &BigUint, n: u32, scale: u32) -> Decimal {
    assert!(n >= 1, "root index must be positive");
    // floor(floor(x)^(1/n)) = floor(x^(1/n)) for real x >= 0.
    let shifted = (num * pow10(scale * n)) / den;
    Decimal::new(BigInt::from(shifted.nth_root(n)), scale)
}

/// Exact check of `d^n <= num/den < (d + ulp)^n`.
pub fn is_certified_root(d: &Decimal, num: &BigUint, den: &BigUint, n: u32) -> bool {
    if d.is_negative() {
        return false;
    }
    let m = d.mantissa.magnitude();
    let unit = pow10(d.scale * n);
    let lo = Pow::pow(m, n) * den;
    let hi = Pow::pow(m + 1u32, n) * den;
    let target = num * unit;
    lo <= target && target < hi
}

/// `(3 + sqrt 5) / 2` truncated to `scale` fraction digits.
pub fn golden_square(scale: u32) -> Decimal {
    let s = (BigUint::from(5u32) * pow10(2 * scale)).sqrt();
    let m = (BigUint::from(3u32) * pow10(scale) + s) / 2u32;
    Decimal::new(BigInt::from(m), scale)
}
