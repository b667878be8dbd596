//! Scalar abstractions.
//!
//! Floating-point work such as rotated or Lp gauges is generic over
//! [`Real`], implemented for `f32` and `f64`. Semi-axes and every
//! floor-sensitive quantity use the exact [`Rational`] type.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational used for semi-axes and closed-form results.
pub type Rational = Ratio<i64>;

/// Floating-point scalar: f32 or f64.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Default membership slack.
    fn default_eps() -> Self;

    /// Default orthogonality tolerance for rotations.
    fn default_ortho_tol() -> Self;

    /// Tolerance on `T * T^-1 - I` for transforms.
    fn default_inverse_tol() -> Self;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    fn from_rational(q: &Rational) -> Self {
        let n = Self::from_i64(*q.numer()).expect("i64 fits");
        let d = Self::from_i64(*q.denom()).expect("i64 fits");
        n / d
    }
}

impl Real for f64 {
    fn default_eps() -> Self {
        1e-9
    }
    fn default_ortho_tol() -> Self {
        1e-12
    }
    fn default_inverse_tol() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn default_eps() -> Self {
        1e-4
    }
    fn default_ortho_tol() -> Self {
        1e-5
    }
    fn default_inverse_tol() -> Self {
        1e-4
    }
}

/// Exact floor of a rational.
pub fn floor_rational(q: &Rational) -> i64 {
    q.numer().div_floor(q.denom())
}

/// True when the rational is an integer.
pub fn is_integer(q: &Rational) -> bool {
    *q.denom() == 1
}

/// Parse an exact rational from decimal (`2.3`, `-0.25`, `1e-2` is rejected),
/// fraction (`1/3`) or integer notation.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = |why: &str| Error::Parse {
        input: text.to_string(),
        reason: why.to_string(),
    };
    if s.is_empty() {
        return Err(bad("empty value"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad("bad numerator"))?;
        let d: i64 = d.trim().parse().map_err(|_| bad("bad denominator"))?;
        if d == 0 {
            return Err(bad("zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad("expected a decimal or n/d fraction"));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: i64 = digits
        .trim_start_matches('0')
        .parse::<i64>()
        .or_else(|e| if digits.chars().all(|c| c == '0') { Ok(0) } else { Err(e) })
        .map_err(|_| bad("too many digits"))?;
    let scale = u32::try_from(frac_part.len()).map_err(|_| bad("too many digits"))?;
    let denom = 10i64.checked_pow(scale).ok_or_else(|| bad("too many digits"))?;
    let q = Rational::new(numer, denom);
    Ok(if negative { -q } else { q })
}

/// Render a rational as `n` or `n/d`.
pub fn format_rational(q: &Rational) -> String {
    if is_integer(q) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn abs_rational(q: &Rational) -> Rational {
    if q.is_negative() {
        -*q
    } else {
        *q
    }
}

pub(crate) fn positive(q: &Rational) -> bool {
    !q.is_zero() && !q.is_negative()
}
