//! Weighted measures against closed forms.

use std::f64::consts::PI;

use flagfloat::measure::{hyperbolic_triangle_area, simplex_integrate, Monomial, Weight};
use flagfloat::point;
use proptest::prelude::*;

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// ∫ x^a y^b over the unit right triangle is a! b! / (a + b + 2)!.
    #[test]
    fn monomials_on_the_standard_triangle(a in 0u32..6, b in 0u32..6, c in 0.5f64..3.0) {
        let w = Weight::Polynomial { coeffs: vec![Monomial { coef: c, powers: vec![a, b] }] };
        let s = [point(&[0.0, 0.0]), point(&[1.0, 0.0]), point(&[0.0, 1.0])];
        let got = simplex_integrate(&w, &s, 1e-13).unwrap().value;
        let want = c * factorial(a) * factorial(b) / factorial(a + b + 2);
        prop_assert!((got - want).abs() <= 1e-10 * want);
    }

    #[test]
    fn hyperbolic_area_matches_quadrature(
        r in proptest::collection::vec(0.0f64..0.97, 3),
        t in proptest::collection::vec(0.0f64..(2.0 * PI), 3),
    ) {
        let p: Vec<[f64; 2]> = (0..3).map(|i| [r[i] * t[i].cos(), r[i] * t[i].sin()]).collect();
        let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]);
        prop_assume!(det.abs() > 1e-3);
        let a = hyperbolic_triangle_area(&p[0], &p[1], &p[2]).unwrap().abs();
        let s: Vec<_> = p.iter().map(|q| point(q)).collect();
        let q = simplex_integrate(&Weight::Hyperbolic, &s, 1e-10 * a).unwrap().value;
        prop_assert!((a - q).abs() <= 1e-7 * q);
        prop_assert!(a < PI);
    }
}

fn lift(x: &[f64; 2]) -> [f64; 3] {
    let r = (1.0 + x[0] * x[0] + x[1] * x[1]).sqrt();
    [x[0] / r, x[1] / r, 1.0 / r]
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Solid angle of the spherical triangle spanned by unit vectors a, b, c.
fn solid_angle(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    let cross = [
        b[1] * c[2] - b[2] * c[1],
        b[2] * c[0] - b[0] * c[2],
        b[0] * c[1] - b[1] * c[0],
    ];
    2.0 * dot3(a, &cross)
        .abs()
        .atan2(1.0 + dot3(a, b) + dot3(b, c) + dot3(c, a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// The spherical density pulls back area from the sphere, so the measure of
    /// a triangle is the solid angle of its lift.
    #[test]
    fn spherical_measure_is_the_lifted_solid_angle(c in proptest::collection::vec(-3.0f64..3.0, 6)) {
        let p = [[c[0], c[1]], [c[2], c[3]], [c[4], c[5]]];
        let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]);
        prop_assume!(det.abs() > 1e-2);
        let want = solid_angle(&lift(&p[0]), &lift(&p[1]), &lift(&p[2]));
        let s: Vec<_> = p.iter().map(|q| point(q)).collect();
        let got = simplex_integrate(&Weight::Spherical, &s, 1e-11).unwrap().value;
        prop_assert!((got - want).abs() <= 1e-9 * want.max(1e-3));
    }
}
