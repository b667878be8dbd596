//! Convex bodies described by their gauge functions.
//!
//! The base shape is an axis-aligned box with exact rational semi-axes.
//! Bodies are either linear images of such a box or Lp-balls sharing its
//! semi-axes. All are o-symmetric.
//!
//! Lattice points get their own membership path. Wherever a comparison can be
//! decided in rational arithmetic it is, so boundary contact on exact bodies
//! never shows up as ambiguity.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{euclidean_opnorm, Matrix};
use crate::scalar::{abs_rational, format_rational, parse_rational, positive, Rational, Real};

/// Three-valued membership answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Inside,
    Outside,
    BoundaryAmbiguous,
}

/// A gauge value that is exact whenever it could be decided in rationals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaugeValue<R: Real = f64> {
    Exact(Rational),
    Approx(R),
}

impl<R: Real> GaugeValue<R> {
    pub fn to_real(&self) -> R {
        match self {
            GaugeValue::Exact(q) => R::from_rational(q),
            GaugeValue::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, GaugeValue::Exact(_))
    }

    pub fn exact(&self) -> Option<Rational> {
        match self {
            GaugeValue::Exact(q) => Some(*q),
            GaugeValue::Approx(_) => None,
        }
    }

    /// Total order: exact against exact is exact, anything else compares
    /// floating values.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (GaugeValue::Exact(a), GaugeValue::Exact(b)) => a.cmp(b),
            _ => self
                .to_real()
                .partial_cmp(&other.to_real())
                .unwrap_or(Ordering::Equal),
        }
    }
}

impl<R: Real> fmt::Display for GaugeValue<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaugeValue::Exact(q) => f.write_str(&format_rational(q)),
            GaugeValue::Approx(x) => write!(f, "{x}"),
        }
    }
}

impl<R: Real> Serialize for GaugeValue<R> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Axis-aligned o-symmetric box `{ |x_i| <= alpha_i }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisBox {
    semi_axes: Vec<Rational>,
    descending: Vec<usize>,
}

impl AxisBox {
    pub fn new(semi_axes: Vec<Rational>) -> Result<Self> {
        if semi_axes.is_empty() {
            return Err(Error::InvalidBody("a box needs at least one semi-axis".into()));
        }
        if let Some((i, a)) = semi_axes.iter().enumerate().find(|(_, a)| !positive(a)) {
            return Err(Error::InvalidBody(format!(
                "semi-axis {i} must be positive, got {}",
                format_rational(a)
            )));
        }
        let mut descending: Vec<usize> = (0..semi_axes.len()).collect();
        // stable: equal semi-axes keep coordinate order
        descending.sort_by(|&i, &j| semi_axes[j].cmp(&semi_axes[i]));
        Ok(Self {
            semi_axes,
            descending,
        })
    }

    /// Parse a comma separated list such as `2.3,1.7` or `5,1/3`.
    pub fn parse(list: &str) -> Result<Self> {
        let alphas = list
            .split(',')
            .enumerate()
            .map(|(i, s)| {
                parse_rational(s).map_err(|e| match e {
                    Error::Parse { input, reason } => Error::Parse {
                        input,
                        reason: format!("semi-axis #{}: {reason}", i + 1),
                    },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphas)
    }

    pub fn from_integers(alphas: &[i64]) -> Result<Self> {
        Self::new(alphas.iter().map(|&a| Rational::from_integer(a)).collect())
    }

    pub fn dim(&self) -> usize {
        self.semi_axes.len()
    }

    pub fn semi_axes(&self) -> &[Rational] {
        &self.semi_axes
    }

    /// Coordinate indices ordered by non-increasing semi-axis.
    pub fn descending_order(&self) -> &[usize] {
        &self.descending
    }

    pub fn is_integer_box(&self) -> bool {
        self.semi_axes.iter().all(|a| *a.denom() == 1)
    }

    /// The dilate `t * K`.
    pub fn scaled(&self, t: Rational) -> Result<Self> {
        Self::new(self.semi_axes.iter().map(|a| a * t).collect())
    }

    pub fn semi_axes_real<R: Real>(&self) -> Vec<R> {
        self.semi_axes.iter().map(R::from_rational).collect()
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }

    /// `max_i |x_i| / alpha_i` in exact arithmetic.
    pub fn gauge_exact(&self, x: &[Rational]) -> Result<Rational> {
        self.check_dim(x.len())?;
        Ok(x.iter()
            .zip(&self.semi_axes)
            .map(|(xi, a)| abs_rational(xi) / a)
            .max()
            .unwrap_or_else(Rational::zero))
    }

    fn gauge_lattice(&self, z: &[i64]) -> Rational {
        z.iter()
            .zip(&self.semi_axes)
            .map(|(&zi, a)| Rational::from_integer(zi.abs()) / a)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    fn gauge_real<R: Real>(&self, x: &[R]) -> R {
        x.iter()
            .zip(&self.semi_axes)
            .map(|(&xi, a)| xi.abs() / R::from_rational(a))
            .fold(R::zero(), R::max)
    }

    /// Euclidean circumradius `sqrt(sum alpha_i^2)`.
    pub fn circumradius<R: Real>(&self) -> R {
        let sum: Rational = self.semi_axes.iter().map(|a| a * a).sum();
        R::from_rational(&sum).sqrt()
    }
}

/// Orthogonal matrix with determinant +1.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation<R: Real = f64> {
    matrix: Matrix<R>,
    tol: R,
}

impl<R: Real> Rotation<R> {
    pub fn new(matrix: Matrix<R>) -> Result<Self> {
        Self::with_tolerance(matrix, R::default_ortho_tol())
    }

    pub fn with_tolerance(matrix: Matrix<R>, tol: R) -> Result<Self> {
        let n = matrix.dim();
        let gram = &matrix.transpose() * &matrix;
        let err = (&gram - &Matrix::identity(n)).max_abs();
        if !(err <= tol) {
            return Err(Error::NotARotation(format!(
                "|RᵀR - I|_max = {err} exceeds {tol}"
            )));
        }
        let det = matrix.determinant();
        if !(det > R::zero()) {
            return Err(Error::NotARotation(format!("determinant {det} is not positive")));
        }
        Ok(Self { matrix, tol })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: Matrix::identity(dim),
            tol: R::default_ortho_tol(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix<R> {
        &self.matrix
    }

    pub fn tolerance(&self) -> R {
        self.tol
    }

    pub fn inverse(&self) -> Matrix<R> {
        self.matrix.transpose()
    }

    /// `‖R - I‖` in the Euclidean operator norm.
    pub fn distance_to_identity(&self) -> Result<R> {
        euclidean_opnorm(&(&self.matrix - &Matrix::identity(self.dim())))
    }
}

/// Invertible linear map stored together with its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct Transform<R: Real = f64> {
    matrix: Matrix<R>,
    inverse: Matrix<R>,
}

impl<R: Real> Transform<R> {
    pub fn new(matrix: Matrix<R>) -> Result<Self> {
        let inverse = matrix.inverse()?;
        Self::with_inverse(matrix, inverse)
    }

    pub fn with_inverse(matrix: Matrix<R>, inverse: Matrix<R>) -> Result<Self> {
        if matrix.dim() != inverse.dim() {
            return Err(Error::DimensionMismatch {
                expected: matrix.dim(),
                got: inverse.dim(),
            });
        }
        let err = (&(&matrix * &inverse) - &Matrix::identity(matrix.dim())).max_abs();
        if !(err <= R::default_inverse_tol()) {
            return Err(Error::Singular(format!("|T T⁻¹ - I|_max = {err}")));
        }
        Ok(Self { matrix, inverse })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: Matrix::identity(dim),
            inverse: Matrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix<R> {
        &self.matrix
    }

    pub fn inverse(&self) -> &Matrix<R> {
        &self.inverse
    }
}

impl<R: Real> From<&Rotation<R>> for Transform<R> {
    fn from(r: &Rotation<R>) -> Self {
        Self {
            matrix: r.matrix.clone(),
            inverse: r.inverse(),
        }
    }
}

/// `R K_0` for an axis box `K_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatedBox<R: Real = f64> {
    base: AxisBox,
    rotation: Rotation<R>,
    inverse: Matrix<R>,
}

impl<R: Real> RotatedBox<R> {
    pub fn new(base: AxisBox, rotation: Rotation<R>) -> Result<Self> {
        if base.dim() != rotation.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                got: rotation.dim(),
            });
        }
        let inverse = rotation.inverse();
        Ok(Self {
            base,
            rotation,
            inverse,
        })
    }

    pub fn base(&self) -> &AxisBox {
        &self.base
    }

    pub fn rotation(&self) -> &Rotation<R> {
        &self.rotation
    }
}

/// `T K_0` for a general invertible `T`; used by the minima sandwich check.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedBox<R: Real = f64> {
    base: AxisBox,
    transform: Transform<R>,
}

impl<R: Real> TransformedBox<R> {
    pub fn new(base: AxisBox, transform: Transform<R>) -> Result<Self> {
        if base.dim() != transform.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                got: transform.dim(),
            });
        }
        Ok(Self { base, transform })
    }

    pub fn base(&self) -> &AxisBox {
        &self.base
    }

    pub fn transform(&self) -> &Transform<R> {
        &self.transform
    }
}

/// Lp exponent; infinity is its own value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent<R: Real = f64> {
    Finite(R),
    Infinite,
}

impl<R: Real> Exponent<R> {
    pub fn finite(p: R) -> Result<Self> {
        if !(p >= R::one()) || !p.is_finite() {
            return Err(Error::InvalidBody(format!("p must be a finite value >= 1, got {p}")));
        }
        Ok(Exponent::Finite(p))
    }

    /// Parses `inf`/`infinity` or a number.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim().to_ascii_lowercase();
        if t == "inf" || t == "infinity" || t == "∞" {
            return Ok(Exponent::Infinite);
        }
        let p: f64 = t.parse().map_err(|_| Error::Parse {
            input: text.to_string(),
            reason: "expected a number >= 1 or inf".into(),
        })?;
        Self::finite(R::lit(p))
    }

    /// The exponent as a small positive integer, when it is one.
    fn as_small_integer(&self) -> Option<u32> {
        match self {
            Exponent::Finite(p) if p.fract() == R::zero() && *p <= R::lit(512.0) => p.to_u32(),
            _ => None,
        }
    }
}

impl<R: Real> fmt::Display for Exponent<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

/// `K_p(alpha) = { sum |x_i / alpha_i|^p <= 1 }`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpBall<R: Real = f64> {
    p: Exponent<R>,
    axes: AxisBox,
}

impl<R: Real> LpBall<R> {
    pub fn new(p: Exponent<R>, semi_axes: AxisBox) -> Result<Self> {
        if let Exponent::Finite(v) = p {
            Exponent::finite(v)?;
        }
        Ok(Self { p, axes: semi_axes })
    }

    pub fn p(&self) -> Exponent<R> {
        self.p
    }

    /// The limiting box with the same semi-axes.
    pub fn semi_axes(&self) -> &AxisBox {
        &self.axes
    }

    fn gauge_real(&self, x: &[R]) -> R {
        let t: Vec<R> = x
            .iter()
            .zip(self.axes.semi_axes())
            .map(|(&xi, a)| xi.abs() / R::from_rational(a))
            .collect();
        let m = t.iter().copied().fold(R::zero(), R::max);
        match self.p {
            Exponent::Infinite => m,
            _ if m == R::zero() => R::zero(),
            Exponent::Finite(p) => {
                // Factor out the largest term so (t/m)^p never underflows to
                // a wrong sum at large p.
                let s: R = t.iter().map(|&ti| (ti / m).powf(p)).sum();
                m * s.powf(p.recip())
            }
        }
    }

    fn classify_exact(&self, x: &[Rational], p: u32) -> Membership {
        let mut sum = BigRational::zero();
        for (xi, a) in x.iter().zip(self.axes.semi_axes()) {
            let r = abs_rational(xi) / a;
            let num = BigInt::from(*r.numer()).pow(p);
            let den = BigInt::from(*r.denom()).pow(p);
            sum += BigRational::new(num, den);
        }
        if sum <= BigRational::one() {
            Membership::Inside
        } else {
            Membership::Outside
        }
    }
}

/// Any supported body.
#[derive(Debug, Clone, PartialEq)]
pub enum Body<R: Real = f64> {
    Axis(AxisBox),
    Rotated(RotatedBox<R>),
    Lp(LpBall<R>),
    /// General linear image of a box. Internal to the minima sandwich check.
    Transformed(TransformedBox<R>),
}

impl<R: Real> From<AxisBox> for Body<R> {
    fn from(b: AxisBox) -> Self {
        Body::Axis(b)
    }
}

impl<R: Real> From<RotatedBox<R>> for Body<R> {
    fn from(b: RotatedBox<R>) -> Self {
        Body::Rotated(b)
    }
}

impl<R: Real> From<LpBall<R>> for Body<R> {
    fn from(b: LpBall<R>) -> Self {
        Body::Lp(b)
    }
}

impl<R: Real> From<TransformedBox<R>> for Body<R> {
    fn from(b: TransformedBox<R>) -> Self {
        Body::Transformed(b)
    }
}

/// Gauge of a box image `M⁻¹ K`: evaluates `‖inverse · x‖_K`.
fn image_gauge<R: Real>(base: &AxisBox, inverse: &Matrix<R>, x: &[R]) -> R {
    base.gauge_real(&inverse.mul_vec(x))
}

/// Rows of `inverse` that are exactly a signed unit vector give exact terms on
/// integer input; the rest are evaluated in floating point.
fn image_lattice_terms<R: Real>(
    base: &AxisBox,
    inverse: &Matrix<R>,
    z: &[i64],
) -> (Option<Rational>, Option<R>) {
    let mut exact: Option<Rational> = None;
    let mut approx: Option<R> = None;
    for (row, alpha) in inverse.rows().zip(base.semi_axes()) {
        match signed_unit_index(row) {
            Some(k) => {
                let term = Rational::from_integer(z[k].abs()) / alpha;
                exact = Some(exact.map_or(term, |e| e.max(term)));
            }
            None => {
                let v: R = row
                    .iter()
                    .zip(z)
                    .map(|(&m, &zi)| m * R::lit(zi as f64))
                    .sum();
                let term = v.abs() / R::from_rational(alpha);
                approx = Some(approx.map_or(term, |a| a.max(term)));
            }
        }
    }
    (exact, approx)
}

fn signed_unit_index<R: Real>(row: &[R]) -> Option<usize> {
    let mut hit = None;
    for (k, &v) in row.iter().enumerate() {
        if v == R::zero() {
            continue;
        }
        if v.abs() != R::one() || hit.is_some() {
            return None;
        }
        hit = Some(k);
    }
    hit
}

fn classify_against_one<R: Real>(value: R, eps: R) -> Membership {
    if value <= R::one() - eps {
        Membership::Inside
    } else if value >= R::one() + eps {
        Membership::Outside
    } else {
        Membership::BoundaryAmbiguous
    }
}

impl<R: Real> Body<R> {
    pub fn dim(&self) -> usize {
        match self {
            Body::Axis(b) => b.dim(),
            Body::Rotated(b) => b.base.dim(),
            Body::Lp(b) => b.axes.dim(),
            Body::Transformed(b) => b.base.dim(),
        }
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }

    /// The axis box underlying this body (semi-axes of the Lp-ball).
    pub fn base_box(&self) -> &AxisBox {
        match self {
            Body::Axis(b) => b,
            Body::Rotated(b) => &b.base,
            Body::Lp(b) => &b.axes,
            Body::Transformed(b) => &b.base,
        }
    }

    /// Whether lattice membership for this body is decided exactly.
    pub fn is_exact(&self) -> bool {
        match self {
            Body::Axis(_) => true,
            Body::Lp(b) => b.p == Exponent::Infinite || b.p.as_small_integer().is_some(),
            _ => false,
        }
    }

    /// Minkowski functional `‖x‖_K`.
    pub fn gauge(&self, x: &[R]) -> Result<R> {
        self.check_dim(x.len())?;
        Ok(match self {
            Body::Axis(b) => b.gauge_real(x),
            Body::Rotated(b) => image_gauge(&b.base, &b.inverse, x),
            Body::Lp(b) => b.gauge_real(x),
            Body::Transformed(b) => image_gauge(&b.base, &b.transform.inverse, x),
        })
    }

    /// Membership of a real point with slack `eps` around the boundary.
    pub fn contains(&self, x: &[R], eps: R) -> Result<Membership> {
        Ok(classify_against_one(self.gauge(x)?, eps))
    }

    /// Membership of a rational point; exact for axis boxes and for Lp-balls
    /// with p = ∞ or a small integer p.
    pub fn contains_rational(&self, x: &[Rational], eps: R) -> Result<Membership> {
        self.check_dim(x.len())?;
        let exact_box = |b: &AxisBox| {
            b.gauge_exact(x).map(|g| {
                if g <= Rational::one() {
                    Membership::Inside
                } else {
                    Membership::Outside
                }
            })
        };
        match self {
            Body::Axis(b) => exact_box(b),
            Body::Lp(b) if b.p == Exponent::Infinite => exact_box(&b.axes),
            Body::Lp(b) if b.p.as_small_integer().is_some() => {
                Ok(b.classify_exact(x, b.p.as_small_integer().unwrap()))
            }
            _ => {
                let xr: Vec<R> = x.iter().map(R::from_rational).collect();
                self.contains(&xr, eps)
            }
        }
    }

    /// Membership of a lattice point. Uses exact arithmetic wherever the
    /// comparison is rational, including unit rows of rotation matrices.
    pub fn classify_lattice(&self, z: &[i64], eps: R) -> Result<Membership> {
        self.check_dim(z.len())?;
        let one = Rational::one();
        Ok(match self {
            Body::Axis(b) => {
                if b.gauge_lattice(z) <= one {
                    Membership::Inside
                } else {
                    Membership::Outside
                }
            }
            Body::Lp(b) => match self.lattice_gauge(z)? {
                GaugeValue::Exact(g) => {
                    if g <= one {
                        Membership::Inside
                    } else {
                        Membership::Outside
                    }
                }
                GaugeValue::Approx(g) => match b.p.as_small_integer() {
                    Some(p) => {
                        let q: Vec<Rational> = z.iter().map(|&v| Rational::from_integer(v)).collect();
                        b.classify_exact(&q, p)
                    }
                    None => classify_against_one(g, eps),
                },
            },
            Body::Rotated(b) => Self::classify_image(&b.base, &b.inverse, z, eps),
            Body::Transformed(b) => Self::classify_image(&b.base, &b.transform.inverse, z, eps),
        })
    }

    fn classify_image(base: &AxisBox, inverse: &Matrix<R>, z: &[i64], eps: R) -> Membership {
        let (exact, approx) = image_lattice_terms(base, inverse, z);
        if exact.is_some_and(|e| e > Rational::one()) {
            return Membership::Outside;
        }
        match approx {
            None => Membership::Inside,
            Some(a) => classify_against_one(a, eps),
        }
    }

    /// Gauge of a lattice point, exact when it can be decided in rationals.
    pub fn lattice_gauge(&self, z: &[i64]) -> Result<GaugeValue<R>> {
        self.check_dim(z.len())?;
        Ok(match self {
            Body::Axis(b) => GaugeValue::Exact(b.gauge_lattice(z)),
            Body::Lp(b) => {
                let nonzero = z.iter().filter(|&&v| v != 0).count();
                if b.p == Exponent::Infinite || nonzero <= 1 {
                    GaugeValue::Exact(b.axes.gauge_lattice(z))
                } else {
                    let x: Vec<R> = z.iter().map(|&v| R::lit(v as f64)).collect();
                    GaugeValue::Approx(b.gauge_real(&x))
                }
            }
            Body::Rotated(b) => Self::image_lattice_gauge(&b.base, &b.inverse, z),
            Body::Transformed(b) => Self::image_lattice_gauge(&b.base, &b.transform.inverse, z),
        })
    }

    fn image_lattice_gauge(base: &AxisBox, inverse: &Matrix<R>, z: &[i64]) -> GaugeValue<R> {
        match image_lattice_terms(base, inverse, z) {
            (Some(e), None) => GaugeValue::Exact(e),
            (None, Some(a)) => GaugeValue::Approx(a),
            (None, None) => GaugeValue::Exact(Rational::zero()),
            (Some(e), Some(a)) => {
                let ef = R::from_rational(&e);
                // The exact term wins when the float terms are clearly below it.
                if a + R::default_eps() * ef.max(R::one()) < ef {
                    GaugeValue::Exact(e)
                } else {
                    GaugeValue::Approx(a.max(ef))
                }
            }
        }
    }

    /// Euclidean circumradius; defined for boxes and rotated boxes only.
    pub fn circumradius(&self) -> Result<R> {
        match self {
            Body::Axis(b) => Ok(b.circumradius()),
            Body::Rotated(b) => Ok(b.base.circumradius()),
            Body::Lp(_) => Err(Error::Unsupported("circumradius of an Lp-ball")),
            Body::Transformed(_) => Err(Error::Unsupported("circumradius of a general linear image")),
        }
    }
}

/// Exact operator norm of `a` with respect to the box gauge:
/// `max_i (sum_j |a_ij| alpha_j) / alpha_i`.
pub fn box_gauge_opnorm<R: Real>(b: &AxisBox, a: &Matrix<R>) -> Result<R> {
    box_gauge_opnorm_witness(b, a).map(|(n, _)| n)
}

/// The box gauge operator norm together with a signed vertex of the box at
/// which it is attained.
pub fn box_gauge_opnorm_witness<R: Real>(b: &AxisBox, a: &Matrix<R>) -> Result<(R, Vec<R>)> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            got: a.dim(),
        });
    }
    let alphas: Vec<R> = b.semi_axes_real();
    let (best, norm) = a
        .rows()
        .zip(&alphas)
        .map(|(row, &ai)| row.iter().zip(&alphas).map(|(&v, &aj)| v.abs() * aj).sum::<R>() / ai)
        .enumerate()
        .fold((0, R::zero()), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let vertex = a
        .row(best)
        .iter()
        .zip(&alphas)
        .map(|(&v, &aj)| if v < R::zero() { -aj } else { aj })
        .collect();
    Ok((norm, vertex))
}

/// Estimate of a gauge operator norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeOpnorm<R: Real = f64> {
    pub value: R,
    /// False when `value` is only a sampled lower bound.
    pub exact: bool,
}

/// `‖A‖_K`: exact for axis boxes; for other bodies a lower bound from
/// sampled boundary points, flagged as inexact.
pub fn gauge_opnorm<R: Real, G: Rng>(
    body: &Body<R>,
    a: &Matrix<R>,
    samples: usize,
    rng: &mut G,
) -> Result<GaugeOpnorm<R>> {
    if let Body::Axis(b) = body {
        return Ok(GaugeOpnorm {
            value: box_gauge_opnorm(b, a)?,
            exact: true,
        });
    }
    Ok(GaugeOpnorm {
        value: sampled_gauge_ratio(body, a, samples, rng)?,
        exact: false,
    })
}

/// `max ‖Ax‖_K / ‖x‖_K` over random directions.
pub fn sampled_gauge_ratio<R: Real, G: Rng>(
    body: &Body<R>,
    a: &Matrix<R>,
    samples: usize,
    rng: &mut G,
) -> Result<R> {
    let d = body.dim();
    if a.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: a.dim(),
        });
    }
    let mut best = R::zero();
    for _ in 0..samples {
        let x: Vec<R> = (0..d).map(|_| R::lit(rng.random_range(-1.0..1.0))).collect();
        let gx = body.gauge(&x)?;
        if gx > R::zero() {
            best = best.max(body.gauge(&a.mul_vec(&x))? / gx);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> AxisBox {
        AxisBox::parse(s).unwrap()
    }

    fn givens(theta: f64) -> Rotation {
        let (s, c) = theta.sin_cos();
        Rotation::new(Matrix::from_rows(&[vec![c, -s], vec![s, c]]).unwrap()).unwrap()
    }

    #[test]
    fn gauge_examples() {
        let b: Body = q("2,1").into();
        assert_eq!(b.gauge(&[2.0, 1.0]).unwrap(), 1.0);
        assert_eq!(b.gauge(&[0.0, 0.0]).unwrap(), 0.0);
        let lp: Body = LpBall::new(Exponent::Finite(2.0), q("1.5,1.5")).unwrap().into();
        let got = lp.gauge(&[1.0, 1.0]).unwrap();
        // scalar oracle: sqrt(sum |x_i/alpha_i|^2)
        let oracle = ((1.0f64 / 1.5).powi(2) * 2.0).sqrt();
        assert!((got - oracle).abs() < 1e-15);
        assert!((got - 0.942_809).abs() < 1e-6);
        assert!(matches!(b.gauge(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn contains_examples() {
        let b: Body = q("1,1").into();
        let one = Rational::one();
        assert_eq!(b.contains_rational(&[one, one], 1e-9).unwrap(), Membership::Inside);

        let rot: Body = RotatedBox::new(q("1,1"), givens(0.1)).unwrap().into();
        // oracle: Rᵀx evaluated numerically
        let (s, c) = 0.1f64.sin_cos();
        assert!((rot.gauge(&[1.0, 1.0]).unwrap() - (c + s)).abs() < 1e-15);
        assert_eq!(rot.contains(&[1.0, 1.0], 1e-9).unwrap(), Membership::Outside);

        let lp: Body = LpBall::new(Exponent::Finite(2.0), q("1.5,1.5")).unwrap().into();
        assert_eq!(lp.contains(&[1.0, 1.0], 1e-9).unwrap(), Membership::Inside);
        assert_eq!(lp.classify_lattice(&[1, 1], 1e-9).unwrap(), Membership::Inside);
    }

    #[test]
    fn boundary_is_ambiguous_on_float_paths_only() {
        let lp: Body = LpBall::new(Exponent::Finite(2.5), q("1,1")).unwrap().into();
        assert_eq!(lp.contains(&[1.0, 0.0], 1e-9).unwrap(), Membership::BoundaryAmbiguous);
        // the lattice path sees a single nonzero coordinate and decides exactly
        assert_eq!(lp.classify_lattice(&[1, 0], 1e-9).unwrap(), Membership::Inside);
        let b: Body = q("1,1").into();
        assert_eq!(b.classify_lattice(&[1, -1], 1e-9).unwrap(), Membership::Inside);
    }

    #[test]
    fn circumradius_examples() {
        let b = q("2.3,1.7");
        let r: f64 = b.circumradius();
        assert!((r - 8.18f64.sqrt()).abs() < 1e-15);
        assert!((r - 2.860_070).abs() < 1e-6);
        let cube: f64 = q("0.5,0.5,0.5,0.5").circumradius();
        assert_eq!(cube, 1.0);
        let rot: Body = RotatedBox::new(b, givens(0.7)).unwrap().into();
        assert_eq!(rot.circumradius().unwrap(), r);
        let lp: Body = LpBall::new(Exponent::Infinite, q("1,1")).unwrap().into();
        assert!(matches!(lp.circumradius(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn box_opnorm_examples() {
        let b = q("2,1");
        assert_eq!(box_gauge_opnorm(&b, &Matrix::<f64>::identity(2)).unwrap(), 1.0);
        let dil: Matrix = &Matrix::identity(2).scale(1.1) - &Matrix::identity(2);
        assert!((box_gauge_opnorm(&b, &dil).unwrap() - 0.1).abs() < 1e-15);
        let shear: Matrix = Matrix::from_rows(&[vec![0.0, 0.1], vec![0.0, 0.0]]).unwrap();
        let exact = box_gauge_opnorm(&b, &shear).unwrap();
        assert!((exact - 0.05).abs() < 1e-15);
        // oracle: maximize the gauge ratio over sampled points
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sampled = sampled_gauge_ratio(&Body::Axis(b), &shear, 100_000, &mut rng).unwrap();
        assert!(sampled <= exact + 1e-12);
        assert!(exact - sampled < 1e-3);
    }

    #[test]
    fn opnorm_witness_attains_norm() {
        let b = q("2,0.5,1.5");
        let a = Matrix::from_rows(&[
            vec![0.1, -0.3, 0.0],
            vec![0.2, 0.05, -0.4],
            vec![-0.1, 0.1, 0.1],
        ])
        .unwrap();
        let (norm, vertex) = box_gauge_opnorm_witness(&b, &a).unwrap();
        let body: Body = b.into();
        assert!((body.gauge(&vertex).unwrap() - 1.0).abs() < 1e-15);
        let ratio = body.gauge(&a.mul_vec(&vertex)).unwrap();
        assert!((ratio - norm).abs() < 1e-14);
    }

    #[test]
    fn non_box_opnorm_is_flagged_inexact() {
        let lp: Body = LpBall::new(Exponent::Finite(2.0), q("1,1")).unwrap().into();
        let a = Matrix::identity(2).scale(0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let est = gauge_opnorm(&lp, &a, 100, &mut rng).unwrap();
        assert!(!est.exact);
        assert!((est.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rotation_validation() {
        let reflect = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        assert!(matches!(Rotation::new(reflect), Err(Error::NotARotation(_))));
        let skew = Matrix::from_rows(&[vec![1.0, 0.1], vec![0.0, 1.0]]).unwrap();
        assert!(Rotation::new(skew.clone()).is_err());
        assert!(Transform::new(skew).is_ok());
        assert!(AxisBox::parse("1,0").is_err());
        assert!(AxisBox::parse("1,-2").is_err());
        let err = AxisBox::parse("1,x").unwrap_err();
        assert!(err.to_string().contains("semi-axis #2"));
    }

    #[test]
    fn descending_order_is_stable() {
        let b = q("1,3,1,2");
        assert_eq!(b.descending_order(), &[1, 3, 0, 2]);
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!(Exponent::<f64>::parse("inf").unwrap(), Exponent::Infinite);
        assert_eq!(Exponent::<f64>::parse("2").unwrap(), Exponent::Finite(2.0));
        assert!(Exponent::<f64>::parse("0.5").is_err());
        assert!(Exponent::<f64>::parse("nan").is_err());
    }

    #[test]
    fn f32_gauges() {
        let b: Body<f32> = RotatedBox::new(q("1,1"), {
            let (s, c) = 0.1f32.sin_cos();
            Rotation::new(Matrix::from_rows(&[vec![c, -s], vec![s, c]]).unwrap()).unwrap()
        })
        .unwrap()
        .into();
        assert_eq!(b.contains(&[1.0, 1.0], f32::default_eps()).unwrap(), Membership::Outside);
        assert_eq!(b.classify_lattice(&[1, 0], f32::default_eps()).unwrap(), Membership::Inside);
    }
}
