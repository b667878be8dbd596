//! Isolation distance, stability radius and rotations of boxes.

mod common;

use common::{brute_isolation_sq, rational_box};
use latstab::stability::{random_rotations, RotationSampler};
use latstab::{
    basis_gauge_check, box_minima_closed_form, corner_exclusion_check, count_box_closed_form, givens_rotation,
    isolation_distance, rhs_functional, rotation_sweep, stability_radius, successive_minima, verify, AxisBox,
    Body, Rational, RotatedBox, Rotation, Status,
};
use proptest::prelude::*;

const EPS: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn isolation_distance_matches_shell_scan(b in rational_box(4)) {
        let delta = isolation_distance(&b);
        prop_assert_eq!(delta * delta, brute_isolation_sq(&b));
        prop_assert!(delta > Rational::from_integer(0) && delta <= Rational::from_integer(1));
        let rep = stability_radius::<f64>(&b);
        let c: f64 = b.semi_axes_real::<f64>().iter().map(|a| a * a).sum::<f64>().sqrt();
        prop_assert!((rep.circumradius - c).abs() < 1e-12);
        prop_assert!((rep.radius - (*delta.numer() as f64 / *delta.denom() as f64) / c).abs() < 1e-12);
    }

    #[test]
    fn sampled_rotations_respect_the_bound(d in 1usize..=5, seed in any::<u64>(), max in 0.01f64..2.0) {
        let mut sampler = RotationSampler::new(d, seed, max).unwrap();
        for _ in 0..5 {
            let r: Rotation = sampler.next_rotation().unwrap();
            let dist = r.distance_to_identity().unwrap();
            prop_assert!(dist <= max + 1e-9, "{dist} > {max}");
            prop_assert!((r.matrix().determinant() - 1.0).abs() < 1e-9);
        }
        let again: Vec<Rotation> = random_rotations(d, seed, 3, max).unwrap();
        let first: Vec<Rotation> = random_rotations(d, seed, 3, max).unwrap();
        prop_assert_eq!(again, first);
    }

    #[test]
    fn basis_gauge_check_bounds_the_minima(b in rational_box(3), seed in any::<u64>(), max in 0.01f64..0.5) {
        let r: Rotation = random_rotations(b.dim(), seed, 1, max).unwrap().remove(0);
        if basis_gauge_check(&b, &r).unwrap() {
            let rotated = successive_minima(&Body::from(RotatedBox::new(b.clone(), r).unwrap())).unwrap();
            let base = box_minima_closed_form::<f64>(&b);
            for (l1, l0) in rotated.reals().iter().zip(base.reals()) {
                prop_assert!(*l1 <= l0 + 1e-9, "{l1} > {l0}");
            }
        }
    }
}

#[test]
fn unit_cube_radius_scales_as_inverse_root_dimension() {
    for d in 1..=6 {
        let rep = stability_radius::<f64>(&AxisBox::from_integers(&vec![1; d]).unwrap());
        assert!((rep.radius - 1.0 / (d as f64).sqrt()).abs() < 1e-12, "d = {d}");
        assert_eq!(rep.delta, Rational::from_integer(1));
    }
}

fn integer_boxes(d: usize) -> Vec<AxisBox> {
    (0..1usize << d)
        .map(|mask| {
            let alphas: Vec<i64> = (0..d).map(|i| 1 + ((mask >> i) & 1) as i64).collect();
            AxisBox::from_integers(&alphas).unwrap()
        })
        .collect()
}

#[test]
fn small_givens_rotations_of_integer_boxes_drop_a_corner() {
    for d in 2..=4 {
        for b in integer_boxes(d) {
            let g0 = count_box_closed_form(&b).unwrap();
            let rhs0 = rhs_functional(&box_minima_closed_form::<f64>(&b).lambdas, EPS).unwrap().value;
            let radius = stability_radius::<f64>(&b).radius;
            let theta_max = 2.0 * (radius / 2.0).asin();
            for i in 0..d {
                for j in i + 1..d {
                    for frac in [0.05, 0.5, 0.99] {
                        let theta = frac * theta_max;
                        let r = givens_rotation(d, i, j, theta).unwrap();
                        assert!(corner_exclusion_check(&b, &r, EPS).unwrap());
                        let v = verify(&Body::from(RotatedBox::new(b.clone(), r).unwrap()), EPS).unwrap();
                        let ctx = format!("{:?} plane ({i},{j}) theta {theta}: {:?}", b.semi_axes(), v);
                        assert!(v.g + v.ambiguous_points < g0, "{ctx}");
                        assert!(v.rhs_lower >= rhs0, "{ctx}");
                        assert_eq!(v.status, Status::Strict, "{ctx}");
                    }
                }
            }
        }
    }
}

#[test]
fn rotations_inside_the_radius_admit_no_exterior_points() {
    for (s, seed) in [("2.3,1.7", 1u64), ("1,1", 2), ("1.5,0.7,2.3", 3)] {
        let b = AxisBox::parse(s).unwrap();
        let g0 = count_box_closed_form(&b).unwrap();
        let radius = stability_radius::<f64>(&b).radius;
        let rotations: Vec<Rotation> = random_rotations(b.dim(), seed, 500, radius * (1.0 - 1e-9)).unwrap();
        for (r, rec) in rotations.iter().zip(rotation_sweep(&b, &rotations, EPS).unwrap()) {
            assert!(rec.opnorm < radius);
            assert!(rec.g + rec.ambiguous <= g0, "{s}: {:?} for {:?}", rec, r);
            assert_ne!(rec.status, Status::Violation);
        }
    }
}
