//! Floating bodies against closed forms and structural invariants.

use flagfloat::floating::{directions, floating_body_with, wet_part_measure, DirectionSpec};
use flagfloat::measure::Weight;
use flagfloat::{convex_hull, generators, point, Point};
use proptest::prelude::*;

/// Wet area of the unit square: four strips of width δ joined by the
/// hyperbolas xy = δ/2 near the corners.
fn square_wet(delta: f64) -> f64 {
    2.0 * delta * (1.0 / delta).ln() + 2.0 * delta * (1.0 - 2f64.ln())
}

#[test]
fn square_wet_part_matches_closed_form() {
    let sq = generators::cube(2).unwrap();
    for d in [1e-2, 1e-3, 1e-4, 1e-5] {
        let w = wet_part_measure(
            &Weight::Uniform,
            &Weight::Uniform,
            &sq,
            d,
            &DirectionSpec::new(64),
            1e-4,
        )
        .unwrap();
        let want = square_wet(d);
        assert!(
            (w.value - want).abs() < 2e-3 * want,
            "{d}: {} vs {want}",
            w.value
        );
    }
}

#[test]
fn delta_beyond_half_the_mass_is_rejected() {
    let sq = generators::cube(2).unwrap();
    assert!(wet_part_measure(
        &Weight::Uniform,
        &Weight::Uniform,
        &sq,
        0.6,
        &DirectionSpec::new(16),
        1e-3
    )
    .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// λ is equivariant under linear maps: wet(AP, |det A|δ) = |det A| wet(P, δ).
    #[test]
    fn uniform_wet_part_is_affine_invariant(
        a in 0.5f64..2.0, b in -0.8f64..0.8, c in 0.5f64..2.0, e in -2.0f64..2.0
    ) {
        let sq = generators::cube(2).unwrap();
        let map = |v: &Point| point(&[a * v[0] + b * v[1] + e, c * v[1]]);
        let image = convex_hull(&sq.vertices().iter().map(map).collect::<Vec<_>>()).unwrap();
        let det = a * c;
        let d = 1e-3;
        let spec = DirectionSpec::new(64);
        let w0 = wet_part_measure(&Weight::Uniform, &Weight::Uniform, &sq, d, &spec, 1e-4).unwrap().value;
        let w1 = wet_part_measure(&Weight::Uniform, &Weight::Uniform, &image, det * d, &spec, 1e-4).unwrap().value;
        prop_assert!((w1 - det * w0).abs() < 3e-3 * det * w0);
    }

    /// Larger δ cuts deeper along every shared direction.
    #[test]
    fn bodies_shrink_as_delta_grows(seed in any::<u64>(), k in 5usize..12, d in 1e-4f64..1e-2) {
        let p = generators::random_polytope(2, k, seed).unwrap();
        let total = p.volume();
        let dirs = directions(&p, &DirectionSpec::new(32), d * total, total);
        let small = floating_body_with(&Weight::Uniform, &p, d * total, &dirs).unwrap();
        let large = floating_body_with(&Weight::Uniform, &p, 2.0 * d * total, &dirs).unwrap();
        prop_assert!(small.contains_body(&p, &large, 1e-12));
    }

    /// Scaling the density by c at weight cδ reproduces the body at δ.
    #[test]
    fn scaled_density_rescales_delta(c in 0.2f64..5.0, d in 1e-4f64..1e-2) {
        let sq = generators::cube(2).unwrap();
        let phi = Weight::one_plus_coordinate(2, 1);
        let dirs = directions(&sq, &DirectionSpec::new(32), d, 1.5);
        let base = floating_body_with(&phi, &sq, d, &dirs).unwrap();
        let scaled = floating_body_with(&phi.scaled(c), &sq, c * d, &dirs).unwrap();
        for (x, y) in base.cuts.iter().zip(&scaled.cuts) {
            prop_assert!((x.offset - y.offset).abs() < 1e-8);
        }
    }
}
