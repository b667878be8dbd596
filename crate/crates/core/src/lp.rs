//! Integer-hull invariance of Lp-balls `K_p(alpha)` as p grows towards the
//! box `K_∞`.

use serde::Serialize;

use crate::bodies::{AxisBox, Body, Exponent, LpBall};
use crate::enumeration::{classify_lattice_points, count_lattice_points, CountResult, EnumConfig};
use crate::error::{Error, Result};
use crate::scalar::{floor_rational, is_integer, Rational, Real};

/// Sufficient exponent for the lattice point set of `K_p` to equal that of
/// the box.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport<R: Real = f64> {
    pub p0: R,
    /// Coordinates with `⌊alpha_i⌋ = 0`; their lattice coordinate is forced
    /// to zero, so they never bind.
    #[serde(rename = "excluded")]
    pub excluded_coords: Vec<usize>,
    /// `max ⌊alpha_i⌋ / alpha_i` over the remaining coordinates (0 if none).
    pub beta_max: R,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn require_non_integer(b: &AxisBox) -> Result<()> {
    if let Some(i) = b.semi_axes().iter().position(is_integer) {
        return Err(Error::Precondition(format!(
            "integer-hull threshold needs every semi-axis non-integer; semi-axis {i} is an integer"
        )));
    }
    Ok(())
}

/// `p0 = ln d_eff / ln(1 / beta_max)`, clamped below at 1.
pub fn p_threshold<R: Real>(b: &AxisBox) -> Result<ThresholdReport<R>> {
    require_non_integer(b)?;
    let mut excluded = Vec::new();
    let mut beta_max: Option<Rational> = None;
    let mut applicable = 0usize;
    for (i, a) in b.semi_axes().iter().enumerate() {
        let f = floor_rational(a);
        if f == 0 {
            excluded.push(i);
            continue;
        }
        applicable += 1;
        let beta = Rational::from_integer(f) / a;
        beta_max = Some(beta_max.map_or(beta, |m| m.max(beta)));
    }
    let Some(beta) = beta_max else {
        return Ok(ThresholdReport {
            p0: R::one(),
            excluded_coords: excluded,
            beta_max: R::zero(),
            note: Some("every semi-axis is below 1; only the origin is a lattice point".into()),
        });
    };
    let raw = R::lit(applicable as f64).ln() / R::from_rational(&beta.recip()).ln();
    let (p0, note) = if raw < R::one() {
        (R::one(), Some(format!("computed threshold {raw} raised to p = 1")))
    } else {
        (raw, None)
    };
    Ok(ThresholdReport {
        p0,
        excluded_coords: excluded,
        beta_max: R::from_rational(&beta),
        note,
    })
}

fn lp_body<R: Real>(b: &AxisBox, p: Exponent<R>) -> Result<Body<R>> {
    Ok(LpBall::new(p, b.clone())?.into())
}

/// `G(K_p, ℤᵈ)` by enumeration.
pub fn count_lp<R: Real>(b: &AxisBox, p: Exponent<R>, eps: R) -> Result<CountResult> {
    count_lattice_points(&lp_body(b, p)?, eps)
}

/// Whether every lattice point of the box survives in `K_p`. Points within
/// `eps` of the boundary of `K_p` count as members of the closed body.
/// Since `K_p ⊆ K_∞`, this is equality of the two lattice point sets.
pub fn lattice_set_matches_box<R: Real>(b: &AxisBox, p: R, eps: R) -> Result<bool> {
    let cfg = EnumConfig::default();
    let at_p = classify_lattice_points(&lp_body(b, Exponent::finite(p)?)?, eps, &cfg)?;
    let boxed = classify_lattice_points(&lp_body(b, Exponent::Infinite)?, eps, &cfg)?;
    let mut present = at_p.inside;
    present.extend(at_p.ambiguous);
    present.sort();
    Ok(present == boxed.inside)
}

/// `[p0, p0 + 1/2, 2 p0, 10 p0]`.
pub fn default_grid<R: Real>(p0: R) -> Vec<R> {
    vec![p0, p0 + R::lit(0.5), p0 + p0, R::lit(10.0) * p0]
}

/// Whether the lattice point set at every `p` of the grid equals the box's.
pub fn threshold_sufficiency_check<R: Real>(b: &AxisBox, grid: &[R], eps: R) -> Result<bool> {
    require_non_integer(b)?;
    for &p in grid {
        if !lattice_set_matches_box(b, p, eps)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest `p*` (to within `tol`) from which the lattice point set equals
/// the box's, by bisection on `[1, p0]`.
pub fn empirical_threshold<R: Real>(b: &AxisBox, tol: R, eps: R) -> Result<R> {
    if !(tol > R::zero()) {
        return Err(Error::Precondition("bisection tolerance must be positive".into()));
    }
    let report = p_threshold::<R>(b)?;
    let mut lo = R::one();
    if lattice_set_matches_box(b, lo, eps)? {
        return Ok(lo);
    }
    let mut hi = report.p0;
    if !lattice_set_matches_box(b, hi, eps)? {
        return Err(Error::Internal(format!(
            "bisection bracket failed: lattice set differs at p0 = {hi}"
        )));
    }
    let two = R::lit(2.0);
    while hi - lo > tol {
        let mid = (lo + hi) / two;
        if lattice_set_matches_box(b, mid, eps)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// For a box with an integer semi-axis: whether `K_p` holds strictly fewer
/// lattice points than the box at every finite `p` of the grid. Ambiguous
/// points are treated as present, so only certified drops count.
pub fn integer_alpha_exclusion_check<R: Real>(b: &AxisBox, grid: &[R], eps: R) -> Result<bool> {
    if !b.semi_axes().iter().any(is_integer) {
        return Err(Error::Precondition("needs at least one integer semi-axis".into()));
    }
    let full = count_lp(b, Exponent::Infinite, eps)?.count;
    for &p in grid {
        let at_p = count_lp(b, Exponent::finite(p)?, eps)?;
        if at_p.upper() >= full {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One row of an Lp sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpSweepRow {
    pub p: String,
    pub count: u64,
    pub ambiguous: u64,
    pub matches_box: bool,
}

/// Lattice counts over a grid of exponents.
pub fn lp_sweep<R: Real>(b: &AxisBox, grid: &[Exponent<R>], eps: R) -> Result<Vec<LpSweepRow>> {
    let full = count_lp(b, Exponent::Infinite, eps)?.count;
    grid.iter()
        .map(|&p| {
            let c = count_lp(b, p, eps)?;
            let matches_box = match p {
                Exponent::Infinite => true,
                Exponent::Finite(v) => c.upper() == full && lattice_set_matches_box(b, v, eps)?,
            };
            Ok(LpSweepRow {
                p: p.to_string(),
                count: c.count,
                ambiguous: c.ambiguous,
                matches_box,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> AxisBox {
        AxisBox::parse(s).unwrap()
    }

    #[test]
    fn threshold_examples() {
        let r = p_threshold::<f64>(&q("1.5,1.5")).unwrap();
        let want = 2f64.ln() / 1.5f64.ln();
        assert!((r.p0 - want).abs() < 1e-15);
        assert!((r.p0 - 1.709_511).abs() < 1e-6);
        assert!(r.excluded_coords.is_empty());

        let r = p_threshold::<f64>(&q("2.3,1.7")).unwrap();
        assert!((r.p0 - 2f64.ln() / (2.3f64 / 2.0).ln()).abs() < 1e-12);
        assert!((r.p0 - 4.959).abs() < 1e-3);
        assert!((r.beta_max - 2.0 / 2.3).abs() < 1e-15);

        let r = p_threshold::<f64>(&q("0.4,0.4,1.5")).unwrap();
        assert_eq!(r.excluded_coords, vec![0, 1]);
        assert_eq!(r.p0, 1.0);
        assert!(r.note.is_some());
        // oracle: counts already match at p = 1
        assert!(lattice_set_matches_box(&q("0.4,0.4,1.5"), 1.0, 1e-9).unwrap());

        assert!(p_threshold::<f64>(&q("1,1.5")).is_err());
        let r = p_threshold::<f64>(&q("0.4,0.4")).unwrap();
        assert_eq!((r.p0, r.beta_max), (1.0, 0.0));
    }

    #[test]
    fn count_examples() {
        let b = q("1.5,1.5");
        assert_eq!(count_lp(&b, Exponent::Finite(2.0), 1e-9).unwrap().count, 9);
        assert_eq!(count_lp(&b, Exponent::Infinite, 1e-9).unwrap().count, 9);
        let c = count_lp(&q("1,1.5"), Exponent::Finite(2.0), 1e-9).unwrap();
        // corners (±1, ±1) give 1 + 4/9 > 1
        assert_eq!((c.count, c.ambiguous), (5, 0));
    }

    #[test]
    fn sufficiency_examples() {
        for s in ["1.5,1.5", "2.3,1.7"] {
            let b = q(s);
            let p0 = p_threshold::<f64>(&b).unwrap().p0;
            assert!(threshold_sufficiency_check(&b, &default_grid(p0), 1e-9).unwrap(), "{s}");
        }
        assert!(threshold_sufficiency_check(&q("0.4,0.4"), &[1.0, 3.0, 50.0], 1e-9).unwrap());
    }

    #[test]
    fn empirical_examples() {
        let p = empirical_threshold(&q("1.5,1.5"), 1e-6, 1e-9).unwrap();
        assert!((p - 2f64.ln() / 1.5f64.ln()).abs() < 1e-5);
        assert_eq!(empirical_threshold(&q("0.4,0.4"), 1e-6, 1e-9).unwrap(), 1.0);

        let b = q("2.3,1.7");
        let p = empirical_threshold(&b, 1e-6, 1e-9).unwrap();
        assert!(p <= p_threshold::<f64>(&b).unwrap().p0 + 1e-6);
        // oracle: binding corner (2,1) solves (2/2.3)^p + (1/1.7)^p = 1
        let f = |p: f64| (2.0 / 2.3f64).powf(p) + (1.0 / 1.7f64).powf(p) - 1.0;
        let (mut lo, mut hi) = (1.0, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((p - hi).abs() < 1e-5, "{p} vs {hi}");
    }

    #[test]
    fn exclusion_examples() {
        assert!(integer_alpha_exclusion_check(&q("1,1.5"), &[2.0, 4.0, 8.0, 16.0], 1e-9).unwrap());
        assert!(integer_alpha_exclusion_check(&q("1,1"), &[2.0], 1e-9).unwrap());
        assert_eq!(count_lp(&q("1,1"), Exponent::Finite(2.0), 1e-9).unwrap().count, 5);
        assert!(integer_alpha_exclusion_check(&q("2,3"), &[100.0], 1e-9).unwrap());
        assert!(integer_alpha_exclusion_check(&q("1.5,2.5"), &[2.0], 1e-9).is_err());
    }

    #[test]
    fn sweep_rows() {
        let rows = lp_sweep(&q("1,1.5"), &[Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinite], 1e-9)
            .unwrap();
        let counts: Vec<u64> = rows.iter().map(|r| r.count).collect();
        assert_eq!(counts, vec![5, 5, 9]);
        assert_eq!(rows[2].p, "inf");
        assert!(rows[2].matches_box && !rows[1].matches_box);
    }
}
