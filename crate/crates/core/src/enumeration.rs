//! Lattice point enumeration in ℤᵈ.

use rayon::prelude::*;
use serde::Serialize;

use crate::bodies::{AxisBox, Body, Membership};
use crate::error::{Error, Result};
use crate::scalar::{floor_rational, Real};

/// Limits on the brute-force iteration space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    pub max_dim: usize,
    pub max_candidates: u128,
}

impl Default for EnumConfig {
    fn default() -> Self {
        Self {
            max_dim: 8,
            max_candidates: 1_000_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    ClosedForm,
    BruteForce,
}

/// `G(K, ℤᵈ)` together with the boundary-ambiguous points left out of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountResult {
    pub count: u64,
    pub ambiguous: u64,
    pub method: CountMethod,
}

impl CountResult {
    /// Upper end of the count when ambiguous points turn out to be inside.
    pub fn upper(&self) -> u64 {
        self.count + self.ambiguous
    }
}

/// Lattice points sorted lexicographically, split by membership.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LatticePoints {
    pub inside: Vec<Vec<i64>>,
    pub ambiguous: Vec<Vec<i64>>,
}

/// Half-widths `h` with `body ⊆ ∏[-h_i, h_i]`.
pub fn bounding_half_widths<R: Real>(body: &Body<R>) -> Vec<R> {
    match body {
        Body::Axis(b) => b.semi_axes_real(),
        Body::Lp(b) => b.semi_axes().semi_axes_real(),
        Body::Rotated(b) => support_widths(b.rotation().matrix(), b.base()),
        Body::Transformed(b) => support_widths(b.transform().matrix(), b.base()),
    }
}

// support function of M·K_0 at ±e_i
fn support_widths<R: Real>(m: &crate::linalg::Matrix<R>, base: &AxisBox) -> Vec<R> {
    let alphas: Vec<R> = base.semi_axes_real();
    m.rows()
        .map(|row| row.iter().zip(&alphas).map(|(&v, &a)| v.abs() * a).sum())
        .collect()
}

/// Integer bounds `b_i` such that every lattice point of `r·body` has
/// `|z_i| <= b_i`.
pub(crate) fn integer_bounds<R: Real>(body: &Body<R>, r: R) -> Vec<i64> {
    let slack = |h: R| {
        let v = h * r * (R::one() + R::lit(1e-12)) + R::lit(1e-9);
        v.floor().to_i64().unwrap_or(i64::MAX / 4)
    };
    match body {
        Body::Axis(_) | Body::Lp(_) if r == R::one() => {
            body.base_box().semi_axes().iter().map(floor_rational).collect()
        }
        _ => bounding_half_widths(body).into_iter().map(slack).collect(),
    }
}

pub(crate) fn check_space(dim: usize, bounds: &[i64], cfg: &EnumConfig) -> Result<()> {
    if dim > cfg.max_dim {
        return Err(Error::DimensionCap {
            dim,
            cap: cfg.max_dim,
        });
    }
    let mut candidates: u128 = 1;
    for &b in bounds {
        candidates = candidates.saturating_mul(2 * b.max(0) as u128 + 1);
    }
    if candidates > cfg.max_candidates {
        return Err(Error::TooManyCandidates {
            candidates,
            limit: cfg.max_candidates,
        });
    }
    Ok(())
}

/// Visit every `z` with `|z_i| <= bounds[i]`, in lexicographic order,
/// with the first coordinate fixed to `first`.
pub(crate) fn for_each_in_slab(bounds: &[i64], first: i64, mut f: impl FnMut(&[i64])) {
    let d = bounds.len();
    let mut z: Vec<i64> = bounds.iter().map(|&b| -b).collect();
    z[0] = first;
    if d == 1 {
        f(&z);
        return;
    }
    loop {
        f(&z);
        let mut k = d - 1;
        loop {
            if z[k] < bounds[k] {
                z[k] += 1;
                break;
            }
            z[k] = -bounds[k];
            if k == 1 {
                return;
            }
            k -= 1;
        }
    }
}

/// Classify all lattice points of the bounding box. Slabs along the first
/// coordinate run in parallel and are concatenated in order.
pub fn classify_lattice_points<R: Real>(
    body: &Body<R>,
    eps: R,
    cfg: &EnumConfig,
) -> Result<LatticePoints> {
    let bounds = integer_bounds(body, R::one());
    check_space(body.dim(), &bounds, cfg)?;
    let b0 = bounds[0];
    let slabs: Vec<Result<LatticePoints>> = (-b0..=b0)
        .into_par_iter()
        .map(|first| {
            let mut out = LatticePoints::default();
            let mut err = None;
            for_each_in_slab(&bounds, first, |z| match body.classify_lattice(z, eps) {
                Ok(Membership::Inside) => out.inside.push(z.to_vec()),
                Ok(Membership::BoundaryAmbiguous) => out.ambiguous.push(z.to_vec()),
                Ok(Membership::Outside) => {}
                Err(e) => err = Some(e),
            });
            err.map_or(Ok(out), Err)
        })
        .collect();
    let mut all = LatticePoints::default();
    for slab in slabs {
        let slab = slab?;
        all.inside.extend(slab.inside);
        all.ambiguous.extend(slab.ambiguous);
    }
    Ok(all)
}

/// Brute-force `G(K, ℤᵈ)` with default limits.
pub fn count_lattice_points<R: Real>(body: &Body<R>, eps: R) -> Result<CountResult> {
    count_lattice_points_with(body, eps, &EnumConfig::default())
}

pub fn count_lattice_points_with<R: Real>(
    body: &Body<R>,
    eps: R,
    cfg: &EnumConfig,
) -> Result<CountResult> {
    let pts = classify_lattice_points(body, eps, cfg)?;
    Ok(CountResult {
        count: pts.inside.len() as u64,
        ambiguous: pts.ambiguous.len() as u64,
        method: CountMethod::BruteForce,
    })
}

/// `∏ (2⌊alpha_i⌋ + 1)` in exact arithmetic.
pub fn count_box_closed_form(b: &AxisBox) -> Result<u64> {
    b.semi_axes().iter().try_fold(1u64, |acc, a| {
        let f = u64::try_from(2 * floor_rational(a) + 1).map_err(|_| Error::Overflow("box count"))?;
        acc.checked_mul(f).ok_or(Error::Overflow("box count"))
    })
}

/// The inside points in lexicographic order.
pub fn list_lattice_points<R: Real>(body: &Body<R>, eps: R) -> Result<Vec<Vec<i64>>> {
    Ok(classify_lattice_points(body, eps, &EnumConfig::default())?.inside)
}
