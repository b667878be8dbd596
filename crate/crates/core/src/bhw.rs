//! The floor-product bound `G(K, ℤᵈ) <= ∏ ⌊2/λ_i + 1⌋` and verdicts on it.

use serde::Serialize;

use crate::bodies::{Body, Exponent, GaugeValue};
use crate::enumeration::{count_box_closed_form, count_lattice_points, CountResult, CountMethod};
use crate::error::{Error, Result};
use crate::minima::{box_minima_closed_form, successive_minima, MinimaResult};
use crate::scalar::{floor_rational, Rational, Real};

/// Result of [`floor_safe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SafeFloor {
    pub value: i64,
    /// The input was within `eps` of an integer and was rounded to it.
    pub snapped: bool,
}

/// Floor with snapping: values within `eps` of an integer round to it.
pub fn floor_safe<R: Real>(x: R, eps: R) -> SafeFloor {
    let nearest = x.round();
    if (x - nearest).abs() <= eps {
        SafeFloor {
            value: nearest.to_i64().unwrap_or(i64::MAX),
            snapped: true,
        }
    } else {
        SafeFloor {
            value: x.floor().to_i64().unwrap_or(i64::MAX),
            snapped: false,
        }
    }
}

/// Exact floor; rational inputs never snap.
pub fn floor_exact(q: &Rational) -> SafeFloor {
    SafeFloor {
        value: floor_rational(q),
        snapped: false,
    }
}

/// Value of the floor product. When a factor snapped, the true product lies
/// in `[lower, value]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RhsValue {
    pub value: u64,
    pub lower: u64,
    pub snapped: bool,
}

/// `∏ ⌊2/λ_i + 1⌋`, exact for rational minima.
pub fn rhs_functional<R: Real>(lambdas: &[GaugeValue<R>], eps: R) -> Result<RhsValue> {
    let mut out = RhsValue {
        value: 1,
        lower: 1,
        snapped: false,
    };
    for l in lambdas {
        let f = match l {
            GaugeValue::Exact(q) => {
                if *q <= Rational::from_integer(0) {
                    return Err(Error::Precondition(format!("nonpositive minimum {l}")));
                }
                floor_exact(&(Rational::from_integer(2) / q + Rational::from_integer(1)))
            }
            GaugeValue::Approx(x) => {
                if !(*x > R::zero()) {
                    return Err(Error::Precondition(format!("nonpositive minimum {l}")));
                }
                floor_safe(R::lit(2.0) / *x + R::one(), eps)
            }
        };
        let hi = u64::try_from(f.value).map_err(|_| Error::Overflow("floor product"))?;
        let lo = if f.snapped { hi.saturating_sub(1) } else { hi };
        out.value = out.value.checked_mul(hi).ok_or(Error::Overflow("floor product"))?;
        out.lower = out.lower.checked_mul(lo).ok_or(Error::Overflow("floor product"))?;
        out.snapped |= f.snapped;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Tight,
    Strict,
    Violation,
    BoundaryAmbiguous,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Tight => "tight",
            Status::Strict => "strict",
            Status::Violation => "violation",
            Status::BoundaryAmbiguous => "boundary-ambiguous",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One verification of the floor-product bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict<R: Real = f64> {
    pub g: u64,
    pub rhs: u64,
    pub lambdas: Vec<GaugeValue<R>>,
    pub status: Status,
    #[serde(rename = "ambiguous")]
    pub ambiguous_points: u64,
    #[serde(skip)]
    pub rhs_lower: u64,
    /// Every input to the verdict was decided in exact arithmetic.
    #[serde(skip)]
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

/// Status from the count range `[g, g + ambiguous]` and the product range
/// `[rhs.lower, rhs.value]`. Uncertainty only yields `BoundaryAmbiguous` when
/// it can change the answer.
fn classify(count: &CountResult, rhs: &RhsValue) -> Status {
    let (g_lo, g_hi) = (count.count, count.upper());
    if g_lo == g_hi && rhs.lower == rhs.value {
        return match g_lo.cmp(&rhs.value) {
            std::cmp::Ordering::Equal => Status::Tight,
            std::cmp::Ordering::Less => Status::Strict,
            std::cmp::Ordering::Greater => Status::Violation,
        };
    }
    if g_hi < rhs.lower {
        Status::Strict
    } else if g_lo > rhs.value {
        Status::Violation
    } else {
        Status::BoundaryAmbiguous
    }
}

/// Verdict on the floor-product bound for one body.
pub fn verify<R: Real>(body: &Body<R>, eps: R) -> Result<Verdict<R>> {
    let closed_box = match body {
        Body::Axis(b) => Some(b),
        Body::Lp(b) if b.p() == Exponent::Infinite => Some(b.semi_axes()),
        _ => None,
    };
    let (count, minima): (CountResult, MinimaResult<R>) = match closed_box {
        Some(b) => (
            CountResult {
                count: count_box_closed_form(b)?,
                ambiguous: 0,
                method: CountMethod::ClosedForm,
            },
            box_minima_closed_form(b),
        ),
        None => (count_lattice_points(body, eps)?, successive_minima(body)?),
    };
    let rhs = rhs_functional(&minima.lambdas, eps)?;
    let exact = body.is_exact() && count.ambiguous == 0 && minima.is_exact() && !rhs.snapped;
    let mut status = classify(&count, &rhs);
    let mut diagnostic = None;
    if status == Status::Violation && !exact {
        // A floating-point path cannot certify a violation.
        status = Status::BoundaryAmbiguous;
        diagnostic = Some(format!(
            "floating-point path reported g = {} > rhs = {}; no exact recheck available",
            count.count, rhs.value
        ));
    }
    Ok(Verdict {
        g: count.count,
        rhs: rhs.value,
        lambdas: minima.lambdas,
        status,
        ambiguous_points: count.ambiguous,
        rhs_lower: rhs.lower,
        exact,
        diagnostic,
    })
}

/// Whether `2⌊x⌋ + 1 <= ⌊2x + 1⌋`.
pub fn floor_inequality_check<R: Real>(x: R) -> bool {
    let two = R::lit(2.0);
    two * x.floor() + R::one() <= (two * x + R::one()).floor()
}

/// Exact version of [`floor_inequality_check`].
pub fn floor_inequality_check_exact(x: &Rational) -> bool {
    let two = Rational::from_integer(2);
    2 * floor_rational(x) < floor_rational(&(two * x + Rational::from_integer(1)))
}
