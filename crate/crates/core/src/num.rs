//! Scalar abstractions shared by the geometric and statistical modules.
//!
//! ROI placement multiplies face dimensions by configurable fractions and
//! rounds with floor/ceil, so the fraction type decides whether boundaries
//! are exact. [`Rational`] is exact; `f32`/`f64` are accepted for callers who
//! already work in floating point. Accuracy percentages only need a real
//! field and use [`Real`].

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, One, ToPrimitive, Zero};

/// Exact rational scalar used for default ROI geometry.
pub type Rational = Ratio<i64>;

/// Scalar usable as a fraction of a pixel extent.
pub trait Fraction: Copy + PartialOrd + Zero + One + Debug + Send + Sync + 'static {
    /// Builds `numer / denom`. `denom` must be non-zero.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// Parses a plain decimal literal such as `0.55`, `1` or `.2`.
    fn parse_decimal(text: &str) -> Option<Self>;

    /// `floor(self * extent)`.
    fn floor_scaled(self, extent: u32) -> i64;

    /// `ceil(self * extent)`.
    fn ceil_scaled(self, extent: u32) -> i64;

    fn to_f64(self) -> f64;
}

impl Fraction for Rational {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(numer, denom)
    }

    fn parse_decimal(text: &str) -> Option<Self> {
        let (negative, digits) = match text.trim() {
            t if t.starts_with('-') => (true, &t[1..]),
            t if t.starts_with('+') => (false, &t[1..]),
            t => (false, t),
        };
        let (whole, frac) = match digits.split_once('.') {
            Some((w, f)) => (w, f),
            None => (digits, ""),
        };
        if whole.is_empty() && frac.is_empty() {
            return None;
        }
        if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return None;
        }
        // i64 holds 18 decimal digits comfortably
        if frac.len() > 18 {
            return None;
        }
        let denom = 10i64.checked_pow(frac.len() as u32)?;
        let whole_value: i64 = if whole.is_empty() { 0 } else { whole.parse().ok()? };
        let frac_value: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
        let numer = whole_value.checked_mul(denom)?.checked_add(frac_value)?;
        let value = Ratio::new(numer, denom);
        Some(if negative { -value } else { value })
    }

    fn floor_scaled(self, extent: u32) -> i64 {
        let scaled = self * Ratio::from_integer(i64::from(extent));
        scaled.numer().div_floor(scaled.denom())
    }

    fn ceil_scaled(self, extent: u32) -> i64 {
        let scaled = self * Ratio::from_integer(i64::from(extent));
        scaled.numer().div_ceil(scaled.denom())
    }

    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

macro_rules! float_fraction {
    ($t:ty) => {
        impl Fraction for $t {
            fn from_ratio(numer: i64, denom: i64) -> Self {
                numer as $t / denom as $t
            }

            fn parse_decimal(text: &str) -> Option<Self> {
                let value: $t = text.trim().parse().ok()?;
                value.is_finite().then_some(value)
            }

            fn floor_scaled(self, extent: u32) -> i64 {
                (self * extent as $t).floor() as i64
            }

            fn ceil_scaled(self, extent: u32) -> i64 {
                (self * extent as $t).ceil() as i64
            }

            fn to_f64(self) -> f64 {
                self as f64
            }
        }
    };
}

float_fraction!(f32);
float_fraction!(f64);

/// Floating-point scalar for reported percentages.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl Real for f32 {}
impl Real for f64 {}

/// `100 * count / denom` with a single rounding for `f64` inputs below 2^53.
pub fn percentage<S: Real>(count: u64, denom: u64) -> Option<S> {
    if denom == 0 {
        return None;
    }
    let numer = S::from_u64(count.checked_mul(100)?)?;
    Some(numer / S::from_u64(denom)?)
}
