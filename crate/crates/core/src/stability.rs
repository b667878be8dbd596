//! Rotation stability of the floor-product bound for boxes.
//!
//! The isolation distance `Δ` of a box is the Euclidean distance from the box
//! to the nearest lattice point outside it. Any rotation with
//! `‖R - I‖ < Δ / circumradius` cannot bring an exterior lattice point inside.
//! For integer boxes, small nonzero rotations also push at least one corner
//! out, which is checked directly here.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bhw::{verify, Status};
use crate::bodies::{AxisBox, Body, Membership, RotatedBox, Rotation};
use crate::error::{Error, Result};
use crate::linalg::{euclidean_opnorm, Matrix};
use crate::scalar::{floor_rational, format_rational, Rational, Real};

/// Isolation distance `min_i (⌊alpha_i⌋ + 1 - alpha_i)`.
///
/// An exterior lattice point exceeds the box in at least one coordinate by at
/// least this much, and the point with that single excess attains it.
pub fn isolation_distance(b: &AxisBox) -> Rational {
    b.semi_axes()
        .iter()
        .map(|a| Rational::from_integer(floor_rational(a) + 1) - a)
        .min()
        .expect("boxes have at least one axis")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport<R: Real = f64> {
    #[serde(serialize_with = "rational_as_string")]
    pub delta: Rational,
    pub radius: R,
    pub circumradius: R,
}

fn rational_as_string<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

/// `Δ / sqrt(sum alpha_i^2)`.
pub fn stability_radius<R: Real>(b: &AxisBox) -> StabilityReport<R> {
    let delta = isolation_distance(b);
    let circumradius: R = b.circumradius();
    StabilityReport {
        delta,
        radius: R::from_rational(&delta) / circumradius,
        circumradius,
    }
}

/// Planar rotation by `theta` in coordinates `(i, j)`.
pub fn givens_rotation<R: Real>(d: usize, i: usize, j: usize, theta: R) -> Result<Rotation<R>> {
    if !(i < j && j < d) {
        return Err(Error::Precondition(format!(
            "Givens plane ({i}, {j}) needs 0 <= i < j < d = {d}"
        )));
    }
    let (s, c) = theta.sin_cos();
    let mut m = Matrix::identity(d);
    m[(i, i)] = c;
    m[(j, j)] = c;
    m[(i, j)] = -s;
    m[(j, i)] = s;
    Rotation::new(m)
}

/// Deterministic stream of random rotations. Each rotation is the exponential
/// of a scaled random skew-symmetric matrix, with `‖R - I‖` uniform in
/// `(0, max_opnorm]`.
pub struct RotationSampler {
    rng: ChaCha8Rng,
    dim: usize,
    max_opnorm: f64,
}

impl RotationSampler {
    pub fn new(dim: usize, seed: u64, max_opnorm: f64) -> Result<Self> {
        if !(max_opnorm > 0.0 && max_opnorm <= 2.0) {
            return Err(Error::Precondition(format!(
                "max_opnorm must lie in (0, 2], got {max_opnorm}"
            )));
        }
        if dim == 0 {
            return Err(Error::Precondition("dimension must be positive".into()));
        }
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dim,
            max_opnorm,
        })
    }

    pub fn next_rotation<R: Real>(&mut self) -> Result<Rotation<R>> {
        let d = self.dim;
        if d == 1 {
            return Ok(Rotation::identity(1));
        }
        loop {
            let mut s = Matrix::<R>::zeros(d);
            for i in 0..d {
                for j in i + 1..d {
                    let v: f64 = self.rng.sample(StandardNormal);
                    s[(i, j)] = R::lit(v);
                    s[(j, i)] = R::lit(-v);
                }
            }
            let norm = euclidean_opnorm(&s)?;
            if norm == R::zero() {
                continue;
            }
            // For skew S with spectral norm θ ≤ π, ‖exp(S) - I‖ = 2 sin(θ/2).
            let target = self.max_opnorm * (1.0 - self.rng.random::<f64>());
            let theta = R::lit(2.0 * (target / 2.0).asin());
            return Rotation::new(s.scale(theta / norm).exp());
        }
    }
}

/// A single rotation from `seed`.
pub fn random_rotation<R: Real>(d: usize, seed: u64, max_opnorm: f64) -> Result<Rotation<R>> {
    RotationSampler::new(d, seed, max_opnorm)?.next_rotation()
}

/// `count` rotations drawn sequentially from one seed.
pub fn random_rotations<R: Real>(d: usize, seed: u64, count: usize, max_opnorm: f64) -> Result<Vec<Rotation<R>>> {
    let mut sampler = RotationSampler::new(d, seed, max_opnorm)?;
    (0..count).map(|_| sampler.next_rotation()).collect()
}

/// Corners `(±⌊alpha_1⌋, ..., ±⌊alpha_d⌋)` of the box's integer hull.
fn hull_corners(b: &AxisBox) -> Vec<Vec<i64>> {
    let mut corners = vec![vec![]];
    for a in b.semi_axes() {
        let f = floor_rational(a);
        let signs: &[i64] = if f == 0 { &[0] } else { &[-f, f] };
        corners = corners
            .into_iter()
            .flat_map(|c| {
                signs.iter().map(move |&s| {
                    let mut next = c.clone();
                    next.push(s);
                    next
                })
            })
            .collect();
    }
    corners
}

fn any_corner_outside<R: Real>(b: &AxisBox, rotation: &Rotation<R>, eps: R) -> Result<bool> {
    let body: Body<R> = RotatedBox::new(b.clone(), rotation.clone())?.into();
    for z in hull_corners(b) {
        if body.classify_lattice(&z, eps)? == Membership::Outside {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether some corner of an integer box leaves `R K_0`.
pub fn corner_exclusion_check<R: Real>(b: &AxisBox, rotation: &Rotation<R>, eps: R) -> Result<bool> {
    if !b.is_integer_box() {
        return Err(Error::Precondition("corner exclusion needs integer semi-axes".into()));
    }
    if b.dim() < 2 {
        return Err(Error::Precondition("corner exclusion needs d >= 2".into()));
    }
    if rotation.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            got: rotation.dim(),
        });
    }
    if rotation.distance_to_identity()? <= R::lit(1e-12) {
        return Err(Error::Precondition("rotation must differ from the identity".into()));
    }
    any_corner_outside(b, rotation, eps)
}

/// Whether `‖e_i‖_{R K_0} <= 1/alpha_i` for every `i`, which forces
/// `λ_i(R K_0) <= λ_i(K_0)`.
pub fn basis_gauge_check<R: Real>(b: &AxisBox, rotation: &Rotation<R>) -> Result<bool> {
    let body: Body<R> = RotatedBox::new(b.clone(), rotation.clone())?.into();
    let d = b.dim();
    for (i, a) in b.semi_axes().iter().enumerate() {
        let mut e = vec![R::zero(); d];
        e[i] = R::one();
        if body.gauge(&e)? > R::from_rational(&a.recip()) + R::lit(1e-12) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One row of a rotation sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord<R: Real = f64> {
    pub opnorm: R,
    pub g: u64,
    pub rhs: u64,
    pub status: Status,
    pub corner_excluded: bool,
    /// Boundary-ambiguous lattice points left out of `g`.
    pub ambiguous: u64,
}

/// Verify `R K_0` for each rotation; records keep input order.
pub fn rotation_sweep<R: Real>(b: &AxisBox, rotations: &[Rotation<R>], eps: R) -> Result<Vec<SweepRecord<R>>> {
    rotations
        .par_iter()
        .enumerate()
        .map(|(index, rotation)| {
            sweep_one(b, rotation, eps).map_err(|e| Error::Sweep {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

fn sweep_one<R: Real>(b: &AxisBox, rotation: &Rotation<R>, eps: R) -> Result<SweepRecord<R>> {
    let body: Body<R> = RotatedBox::new(b.clone(), rotation.clone())?.into();
    let verdict = verify(&body, eps)?;
    Ok(SweepRecord {
        opnorm: rotation.distance_to_identity()?,
        g: verdict.g,
        rhs: verdict.rhs,
        status: verdict.status,
        corner_excluded: any_corner_outside(b, rotation, eps)?,
        ambiguous: verdict.ambiguous_points,
    })
}

pub const SWEEP_CSV_HEADER: [&str; 5] = ["opnorm", "g", "rhs", "status", "corner_excluded"];

/// Write sweep records as CSV with the fixed header.
pub fn write_sweep_csv<R: Real, W: Write>(records: &[SweepRecord<R>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
    w.write_record(SWEEP_CSV_HEADER).map_err(io)?;
    for r in records {
        w.write_record([
            r.opnorm.to_string(),
            r.g.to_string(),
            r.rhs.to_string(),
            r.status.to_string(),
            r.corner_excluded.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Internal(format!("csv: {e}")))
}
