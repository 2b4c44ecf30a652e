//! The two arithmetic modes.
//!
//! Every matrix in the crate is generic over [`Scalar`]. `Rational` is exact
//! (arbitrary precision); `f64` is the fast mode. Conversions go one way only:
//! rationals can be rounded to floats, never the reverse except for
//! [`Scalar::from_rational`] on inputs that are exact by construction.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

/// Magnitude below which a float is treated as zero in structural checks.
pub const FLOAT_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Float => write!(f, "float"),
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    const MODE: Mode;

    fn from_rational(q: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    /// Exact rational value. Panics on non-finite floats.
    fn to_rational(&self) -> Rational;
    fn abs_val(&self) -> Self;

    /// Exact zero in rational mode; `|x| <= FLOAT_EPS * scale` in float mode.
    fn is_negligible(&self, scale: f64) -> bool;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Serialized form: `p/q` (or an integer) for rationals, 15 significant digits for floats.
    fn to_text(&self) -> String;
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    fn to_text(&self) -> String {
        self.to_string()
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Rational {
        Rational::from_float(*self).expect("finite float")
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= FLOAT_EPS * scale.max(1.0)
    }

    fn to_text(&self) -> String {
        fmt_sig15(*self)
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(q) {
        if v.is_finite() {
            return v;
        }
    }
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rint(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

/// Parses `p/q`, an integer, or a plain decimal such as `0.25` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac.is_empty())
        {
            return None;
        }
        let digits = format!("{int_digits}{frac}");
        let mut num: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().ok()?
        };
        if neg {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Some(Rational::new(num, den));
    }
    let p: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(p))
}

/// Decimal rendering with 15 significant digits, trailing zeros trimmed.
pub fn fmt_sig15(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-6..=15).contains(&mag) {
        return format!("{:.14e}", v);
    }
    let decimals = (14 - mag).max(0) as usize;
    let mut s = format!("{:.*}", decimals, v);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-7"), Some(rint(-7)));
        assert_eq!(parse_rational("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rational("-.5"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn sig15_formatting() {
        assert_eq!(fmt_sig15(0.5), "0.5");
        assert_eq!(fmt_sig15(2.0), "2");
        assert_eq!(fmt_sig15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_sig15(-0.0), "0");
    }

    #[test]
    fn float_negligibility_scales() {
        assert!(1e-13_f64.is_negligible(1.0));
        assert!(!1e-11_f64.is_negligible(1.0));
        assert!(1e-11_f64.is_negligible(100.0));
    }
}
