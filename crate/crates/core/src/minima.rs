//! Successive minima `λ_1 <= ... <= λ_d` of a body with respect to ℤᵈ.

use std::cmp::Ordering;

use num_integer::Integer;
use serde::Serialize;

use crate::bodies::{box_gauge_opnorm, AxisBox, Body, GaugeValue, Transform, TransformedBox};
use crate::enumeration::{check_space, for_each_in_slab, integer_bounds, EnumConfig};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Rational, Real};

/// Doubling rounds before the solver gives up on a degenerate body.
pub const MAX_DOUBLINGS: usize = 20;

/// Successive minima with one achieving lattice vector per index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimaResult<R: Real = f64> {
    pub lambdas: Vec<GaugeValue<R>>,
    pub witnesses: Vec<Vec<i64>>,
}

impl<R: Real> MinimaResult<R> {
    pub fn is_exact(&self) -> bool {
        self.lambdas.iter().all(GaugeValue::is_exact)
    }

    pub fn reals(&self) -> Vec<R> {
        self.lambdas.iter().map(GaugeValue::to_real).collect()
    }
}

/// Closed form for boxes: `λ_i = 1/alpha_(i)` with the semi-axes sorted in
/// descending order, witnessed by the matching unit vectors.
pub fn box_minima_closed_form<R: Real>(b: &AxisBox) -> MinimaResult<R> {
    let d = b.dim();
    let mut lambdas = Vec::with_capacity(d);
    let mut witnesses = Vec::with_capacity(d);
    for &k in b.descending_order() {
        lambdas.push(GaugeValue::Exact(b.semi_axes()[k].recip()));
        let mut e = vec![0; d];
        e[k] = 1;
        witnesses.push(e);
    }
    MinimaResult { lambdas, witnesses }
}

/// General solver with default enumeration limits.
pub fn successive_minima<R: Real>(body: &Body<R>) -> Result<MinimaResult<R>> {
    successive_minima_with(body, &EnumConfig::default())
}

/// Enumerate `{z ≠ 0 : ‖z‖_K <= r}`, sort by gauge and greedily keep vectors
/// that raise the rank; double `r` until `d` independent vectors are found.
pub fn successive_minima_with<R: Real>(body: &Body<R>, cfg: &EnumConfig) -> Result<MinimaResult<R>> {
    let d = body.dim();
    if d > cfg.max_dim {
        return Err(Error::DimensionCap {
            dim: d,
            cap: cfg.max_dim,
        });
    }
    let mut radius = (0..d)
        .map(|i| {
            let mut e = vec![R::zero(); d];
            e[i] = R::one();
            body.gauge(&e)
        })
        .collect::<Result<Vec<R>>>()?
        .into_iter()
        .fold(R::infinity(), R::min);
    let slack = R::one() + R::lit(1e-9);

    for _ in 0..MAX_DOUBLINGS {
        let bounds = integer_bounds(body, radius);
        check_space(d, &bounds, cfg)?;
        let mut candidates: Vec<(GaugeValue<R>, Vec<i64>)> = Vec::new();
        let mut failure = None;
        for first in 0..=bounds[0] {
            for_each_in_slab(&bounds, first, |z| {
                if !is_canonical(z) {
                    return;
                }
                match body.lattice_gauge(z) {
                    Ok(g) if g.to_real() <= radius * slack => candidates.push((g, z.to_vec())),
                    Ok(_) => {}
                    Err(e) => failure = Some(e),
                }
            });
        }
        if let Some(e) = failure {
            return Err(e);
        }
        candidates.sort_by(|a, b| compare_candidates(a, b));

        let mut rank = RankTracker::new(d);
        let mut result = MinimaResult {
            lambdas: Vec::with_capacity(d),
            witnesses: Vec::with_capacity(d),
        };
        for (g, z) in candidates {
            if rank.insert(&z) {
                result.lambdas.push(g);
                result.witnesses.push(z);
                if result.lambdas.len() == d {
                    break;
                }
            }
        }
        let complete = result.lambdas.len() == d
            && result.lambdas.last().is_some_and(|g| g.to_real() <= radius);
        if complete {
            return Ok(result);
        }
        radius = radius + radius;
    }
    Err(Error::RadiusCap(MAX_DOUBLINGS))
}

// one representative of each ±z pair: first nonzero coordinate positive
fn is_canonical(z: &[i64]) -> bool {
    z.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0)
}

// gauge, then l1 length, then descending lexicographic order (e_1 before e_2)
fn compare_candidates<R: Real>(a: &(GaugeValue<R>, Vec<i64>), b: &(GaugeValue<R>, Vec<i64>)) -> Ordering {
    a.0.total_cmp(&b.0)
        .then_with(|| l1(&a.1).cmp(&l1(&b.1)))
        .then_with(|| b.1.cmp(&a.1))
}

fn l1(z: &[i64]) -> i64 {
    z.iter().map(|v| v.abs()).sum()
}

/// Row echelon form over ℤ, kept primitive by gcd division.
struct RankTracker {
    rows: Vec<(usize, Vec<i128>)>,
    dim: usize,
}

impl RankTracker {
    fn new(dim: usize) -> Self {
        Self { rows: Vec::new(), dim }
    }

    /// Adds `z` if it is independent of the rows so far.
    fn insert(&mut self, z: &[i64]) -> bool {
        let mut v: Vec<i128> = z.iter().map(|&x| x as i128).collect();
        for (pivot, row) in &self.rows {
            let f = v[*pivot];
            if f == 0 {
                continue;
            }
            let p = row[*pivot];
            for (x, &r) in v.iter_mut().zip(row) {
                *x = *x * p - f * r;
            }
            let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
            if g > 1 {
                v.iter_mut().for_each(|x| *x /= g);
            }
        }
        match (0..self.dim).find(|&i| v[i] != 0) {
            Some(pivot) => {
                self.rows.push((pivot, v));
                true
            }
            None => false,
        }
    }
}

/// Rank over ℚ of a set of integer vectors.
pub fn lattice_rank(vectors: &[Vec<i64>]) -> usize {
    let Some(dim) = vectors.first().map(Vec::len) else {
        return 0;
    };
    let mut t = RankTracker::new(dim);
    vectors.iter().filter(|v| t.insert(v)).count()
}

/// Outcome of checking `λ_i(K)/(1+ε') <= λ_i(TK) <= (1+ε) λ_i(K)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport<R: Real = f64> {
    /// `‖T - I‖_K`
    pub eps: R,
    /// `‖T⁻¹ - I‖_K`
    pub eps_prime: R,
    pub base: Vec<GaugeValue<R>>,
    pub image: Vec<GaugeValue<R>>,
    /// `λ_i / (1 + ε′) <= λ_i(TK)` as stated.
    pub lower_ok: Vec<bool>,
    /// `λ_i(TK) <= (1 + ε) λ_i` as stated.
    pub upper_ok: Vec<bool>,
    /// `λ_i / (1 + ε) <= λ_i(TK)`, from `TK ⊆ (1 + ε) K`.
    pub derived_lower_ok: Vec<bool>,
    /// `λ_i(TK) <= (1 + ε′) λ_i`, from `K ⊆ (1 + ε′) TK`.
    pub derived_upper_ok: Vec<bool>,
}

impl<R: Real> SandwichReport<R> {
    pub fn holds(&self) -> bool {
        self.lower_ok.iter().chain(&self.upper_ok).all(|&b| b)
    }

    /// Whether the bounds that follow from the two inclusions hold.
    pub fn derived_holds(&self) -> bool {
        self.derived_lower_ok.iter().chain(&self.derived_upper_ok).all(|&b| b)
    }
}

/// Compare the minima of `T K` against the continuity bounds for the box
/// gauge norms of `T - I` and `T⁻¹ - I`.
pub fn check_minima_sandwich<R: Real>(b: &AxisBox, t: &Transform<R>) -> Result<SandwichReport<R>> {
    let id = Matrix::identity(b.dim());
    let eps = box_gauge_opnorm(b, &(t.matrix() - &id))?;
    let eps_prime = box_gauge_opnorm(b, &(t.inverse() - &id))?;
    let base = box_minima_closed_form::<R>(b);
    let image_body: Body<R> = TransformedBox::new(b.clone(), t.clone())?.into();
    let image = successive_minima(&image_body)?;
    let slack = R::lit(1e-9).max(R::epsilon() * R::lit(64.0));
    let (mut lower_ok, mut upper_ok) = (Vec::new(), Vec::new());
    let (mut derived_lower_ok, mut derived_upper_ok) = (Vec::new(), Vec::new());
    for (l0, l1) in base.reals().into_iter().zip(image.reals()) {
        lower_ok.push(l0 / (R::one() + eps_prime) <= l1 + slack);
        upper_ok.push(l1 <= (R::one() + eps) * l0 + slack);
        derived_lower_ok.push(l0 / (R::one() + eps) <= l1 + slack);
        derived_upper_ok.push(l1 <= (R::one() + eps_prime) * l0 + slack);
    }
    Ok(SandwichReport {
        eps,
        eps_prime,
        base: base.lambdas,
        image: image.lambdas,
        lower_ok,
        upper_ok,
        derived_lower_ok,
        derived_upper_ok,
    })
}

/// Exact `λ` values of a result, when every entry is exact.
pub fn exact_lambdas<R: Real>(m: &MinimaResult<R>) -> Option<Vec<Rational>> {
    m.lambdas.iter().map(GaugeValue::exact).collect()
}

/// Check that the minima are sorted with independent witnesses, and that each
/// witness has gauge equal to its λ.
pub fn validate<R: Real>(body: &Body<R>, m: &MinimaResult<R>, tol: R) -> Result<()> {
    let d = body.dim();
    if m.lambdas.len() != d || m.witnesses.len() != d {
        return Err(Error::Internal("wrong number of minima".into()));
    }
    if m.lambdas.windows(2).any(|w| w[0].total_cmp(&w[1]) == Ordering::Greater) {
        return Err(Error::Internal("minima are not sorted".into()));
    }
    if lattice_rank(&m.witnesses) != d {
        return Err(Error::Internal("witnesses are dependent".into()));
    }
    for (l, w) in m.lambdas.iter().zip(&m.witnesses) {
        let g = body.lattice_gauge(w)?;
        let ok = match (l, &g) {
            (GaugeValue::Exact(a), GaugeValue::Exact(b)) => a == b,
            _ => (l.to_real() - g.to_real()).abs() <= tol,
        };
        if !ok {
            return Err(Error::Internal(format!("witness {w:?} has gauge {g}, expected {l}")));
        }
    }
    if m.lambdas.iter().any(|l| !(l.to_real() > R::zero())) {
        return Err(Error::Internal("nonpositive minimum".into()));
    }
    Ok(())
}
