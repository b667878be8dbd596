//! Shared strategies and independent oracles for the property tests.

#![allow(dead_code)]

use latstab::{AxisBox, Rational};
use num_traits::Zero;
use proptest::prelude::*;

/// Semi-axis `n / den` in `[1/10, 7/2]` with a small denominator.
pub fn semi_axis() -> impl Strategy<Value = Rational> {
    (prop::sample::select(vec![1i64, 2, 3, 4, 5, 10]), 1i64..=35)
        .prop_map(|(den, n)| Rational::new(n, den))
        .prop_filter("at most 7/2", |q| *q <= Rational::new(7, 2))
}

pub fn rational_box(max_dim: usize) -> impl Strategy<Value = AxisBox> {
    prop::collection::vec(semi_axis(), 1..=max_dim).prop_map(|v| AxisBox::new(v).unwrap())
}

/// Boxes whose semi-axes are all non-integer.
pub fn non_integer_box(max_dim: usize) -> impl Strategy<Value = AxisBox> {
    prop::collection::vec(semi_axis().prop_filter("non-integer", |q| !q.is_integer()), 1..=max_dim)
        .prop_map(|v| AxisBox::new(v).unwrap())
}

/// Lattice points of the box by plain nested loops over `[-4, 4]ᵈ` with an
/// exact comparison `|z_i| <= alpha_i`.
pub fn brute_box_points(b: &AxisBox) -> Vec<Vec<i64>> {
    let d = b.dim();
    let mut out = Vec::new();
    let mut z = vec![-4i64; d];
    loop {
        if z.iter()
            .zip(b.semi_axes())
            .all(|(&zi, a)| Rational::from_integer(zi.abs()) <= *a)
        {
            out.push(z.clone());
        }
        let mut k = d;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if z[k] < 4 {
                z[k] += 1;
                break;
            }
            z[k] = -4;
        }
    }
}

/// Squared Euclidean distance from the box to the nearest lattice point
/// outside it, scanning the shell `[-⌈α⌉-1, ⌈α⌉+1]ᵈ`.
pub fn brute_isolation_sq(b: &AxisBox) -> Rational {
    let bounds: Vec<i64> = b.semi_axes().iter().map(|a| a.ceil().to_integer() + 1).collect();
    let d = b.dim();
    let mut best: Option<Rational> = None;
    let mut z: Vec<i64> = bounds.iter().map(|&m| -m).collect();
    loop {
        let mut dist = Rational::zero();
        let mut outside = false;
        for (zi, a) in z.iter().zip(b.semi_axes()) {
            let excess = Rational::from_integer(zi.abs()) - a;
            if excess > Rational::zero() {
                outside = true;
                dist += excess * excess;
            }
        }
        if outside {
            best = Some(best.map_or(dist, |m: Rational| m.min(dist)));
        }
        let mut k = d;
        loop {
            if k == 0 {
                return best.expect("shell contains exterior points");
            }
            k -= 1;
            if z[k] < bounds[k] {
                z[k] += 1;
                break;
            }
            z[k] = -bounds[k];
        }
    }
}
